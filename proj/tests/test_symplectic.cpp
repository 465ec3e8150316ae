#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "preq/rng.hpp"
#include "preq/symplectic.hpp"
#include "test_util.hpp"

using namespace preq;
using testutil::pt1;
using testutil::pt2;

namespace {

// Random polynomial of total degree <= deg, coefficients in [-1, 1]; the
// test-local twin of the generator the verification suite uses.
Observable random_polynomial(Rng& rng, int n, int deg) {
  std::vector<std::vector<int>> monomials;
  std::vector<int> expo(2 * n, 0);
  std::function<void(int, int)> enumerate = [&](int var, int remaining) {
    if (var == 2 * n) {
      monomials.push_back(expo);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      expo[var] = e;
      enumerate(var + 1, remaining - e);
    }
    expo[var] = 0;
  };
  enumerate(0, deg);
  ExprPtr acc = expr_constant(0.0);
  for (const std::vector<int>& m : monomials) {
    ExprPtr term = expr_constant(rng.uniform(-1.0, 1.0));
    for (int v = 0; v < 2 * n; ++v) {
      if (m[v] == 0) continue;
      term = fold_mul(term, fold_pow(v < n ? expr_variable(VarKind::q, v + 1)
                                           : expr_variable(VarKind::p, v - n + 1),
                                     m[v]));
    }
    acc = fold_add(acc, term);
  }
  return Observable(n, acc);
}

}  // namespace

TEST_CASE("hamiltonian field of the oscillator") {
  const HamiltonianField X =
      hamiltonian_vector_field(parse_observable("(p1^2 + q1^2)/2", 1));
  const TangentVector v = evaluate_field(X, pt1(1, 0));
  CHECK(v.dq[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.dp[0] == -1.0);
}

TEST_CASE("hamiltonian field of a coordinate and of a constant") {
  const HamiltonianField Xq = hamiltonian_vector_field(parse_observable("q1", 1));
  CHECK(is_constant(Xq.dq[0].root(), 0.0));
  CHECK(is_constant(Xq.dp[0].root(), -1.0));

  const HamiltonianField Xc =
      hamiltonian_vector_field(Observable(1, expr_constant(4.25)));
  CHECK(is_constant(Xc.dq[0].root(), 0.0));
  CHECK(is_constant(Xc.dp[0].root(), 0.0));
}

TEST_CASE("evaluate_field: free particle") {
  const HamiltonianField X =
      hamiltonian_vector_field(parse_observable("p1^2/2", 1));
  const TangentVector v = evaluate_field(X, pt1(0, 3));
  CHECK(v.dq[0] == 3.0);
  CHECK(v.dp[0] == 0.0);
}

TEST_CASE("symplectic product on basis vectors") {
  const TangentVector dq{{1.0}, {0.0}};
  const TangentVector dp{{0.0}, {1.0}};
  CHECK(symplectic_product(dq, dp) == -1.0);
  CHECK(symplectic_product(dp, dq) == 1.0);
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const TangentVector u{{rng.uniform(-2, 2)}, {rng.uniform(-2, 2)}};
    const TangentVector v{{rng.uniform(-2, 2)}, {rng.uniform(-2, 2)}};
    CHECK(symplectic_product(u, u) == 0.0);
    CHECK(symplectic_product(u, v) == -symplectic_product(v, u));
  }
}

TEST_CASE("poisson bracket conventions on the canonical pair") {
  const Observable q = parse_observable("q1", 1);
  const Observable p = parse_observable("p1", 1);
  CHECK(is_constant(poisson_bracket(q, p).root(), -1.0));
  CHECK(is_constant(canonical_poisson_bracket(q, p).root(), 1.0));
}

TEST_CASE("bracket of an observable with itself vanishes exactly") {
  const Observable f = parse_observable("q1^2*p1 + sin(q1)", 1);
  const Observable ff = poisson_bracket(f, f);
  for (const PhasePoint& z : testutil::seeded_points(17, 1, 50))
    CHECK(ff(z) == 0.0);
}

TEST_CASE("bracket of squares") {
  const Observable b = poisson_bracket(parse_observable("q1^2", 1),
                                       parse_observable("p1^2", 1));
  for (const PhasePoint& z : testutil::seeded_points(19, 1, 50))
    CHECK(b(z) == doctest::Approx(-4 * z.q[0] * z.p[0]).epsilon(1e-14));
  const Observable c = canonical_poisson_bracket(parse_observable("q1^2", 1),
                                                 parse_observable("p1^2", 1));
  for (const PhasePoint& z : testutil::seeded_points(19, 1, 50))
    CHECK(c(z) == -b(z));
}

TEST_CASE("lie bracket of the square fields") {
  const HamiltonianField X = hamiltonian_vector_field(parse_observable("q1^2", 1));
  const HamiltonianField Y = hamiltonian_vector_field(parse_observable("p1^2", 1));
  const VectorField lie = field_lie_bracket(X, Y);
  for (const PhasePoint& z : testutil::seeded_points(23, 1, 20)) {
    const TangentVector v = evaluate_field(lie, z);
    CHECK(v.dq[0] == doctest::Approx(-4 * z.q[0]).epsilon(1e-14));
    CHECK(v.dp[0] == doctest::Approx(4 * z.p[0]).epsilon(1e-14));
  }
}

TEST_CASE("lie bracket degenerate cases") {
  const HamiltonianField X =
      hamiltonian_vector_field(parse_observable("q1^2*p1", 1));
  const VectorField self = field_lie_bracket(X, X);
  for (const PhasePoint& z : testutil::seeded_points(29, 1, 20)) {
    const TangentVector v = evaluate_field(self, z);
    CHECK(v.dq[0] == 0.0);
    CHECK(v.dp[0] == 0.0);
  }
  // constant coefficient fields commute, and the bracket folds to zero
  const VectorField flat =
      field_lie_bracket(hamiltonian_vector_field(parse_observable("q1", 1)),
                        hamiltonian_vector_field(parse_observable("p1", 1)));
  CHECK(is_constant(flat.dq[0].root(), 0.0));
  CHECK(is_constant(flat.dp[0].root(), 0.0));
}

TEST_CASE("Lie-algebra homomorphism: [X_f, X_g] = X_{{f,g}}") {
  Rng rng(20260810);
  double worst = 0.0;
  for (int pair = 0; pair < 10; ++pair) {
    const int n = pair % 2 + 1;
    const Observable f = random_polynomial(rng, n, 3);
    const Observable g = random_polynomial(rng, n, 3);
    const VectorField lie = field_lie_bracket(hamiltonian_vector_field(f),
                                              hamiltonian_vector_field(g));
    const HamiltonianField Xfg =
        hamiltonian_vector_field(poisson_bracket(f, g));
    for (int k = 0; k < 50; ++k) {
      const PhasePoint z = rng.point(n, 2.0);
      const TangentVector a = evaluate_field(lie, z);
      const TangentVector b = evaluate_field(Xfg, z);
      for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::fabs(a.dq[i] - b.dq[i]));
        worst = std::max(worst, std::fabs(a.dp[i] - b.dp[i]));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("Jacobi identity for the omega bracket") {
  Rng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = trial % 2 + 1;
    const Observable f = random_polynomial(rng, n, 3);
    const Observable g = random_polynomial(rng, n, 3);
    const Observable h = random_polynomial(rng, n, 3);
    const Observable cycle(
        n,
        fold_add(fold_add(poisson_bracket(f, poisson_bracket(g, h)).root(),
                          poisson_bracket(g, poisson_bracket(h, f)).root()),
                 poisson_bracket(h, poisson_bracket(f, g)).root()));
    for (int k = 0; k < 30; ++k)
      worst = std::max(worst, std::fabs(cycle(rng.point(n, 2.0))));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("bracket evaluates to the symplectic product of the fields") {
  Rng rng(37);
  const Observable f = parse_observable("q1^2*p1 + cos(q1)", 1);
  const Observable g = parse_observable("p1^3 - q1*p1", 1);
  const Observable fg = poisson_bracket(f, g);
  const HamiltonianField Xf = hamiltonian_vector_field(f);
  const HamiltonianField Xg = hamiltonian_vector_field(g);
  for (int k = 0; k < 50; ++k) {
    const PhasePoint z = rng.point(1, 2.0);
    const double via_fields =
        symplectic_product(evaluate_field(Xf, z), evaluate_field(Xg, z));
    CHECK(fg(z) == doctest::Approx(via_fields).epsilon(1e-12));
  }
}

TEST_CASE("omega-compatibility: omega0(X_f, e) = -df(e)") {
  Rng rng(41);
  const Observable f = parse_observable("q1*p2^2 - q2^3 + p1", 2);
  const HamiltonianField X = hamiltonian_vector_field(f);
  std::vector<Observable> grads;
  for (int i = 1; i <= 2; ++i) grads.push_back(differentiate(f, VarKind::q, i));
  for (int i = 1; i <= 2; ++i) grads.push_back(differentiate(f, VarKind::p, i));
  for (int k = 0; k < 30; ++k) {
    const PhasePoint z = rng.point(2, 2.0);
    const TangentVector v = evaluate_field(X, z);
    for (int i = 0; i < 4; ++i) {
      TangentVector e{{0.0, 0.0}, {0.0, 0.0}};
      (i < 2 ? e.dq[i] : e.dp[i - 2]) = 1.0;
      CHECK(symplectic_product(v, e) ==
            doctest::Approx(-grads[i](z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("angular momentum commutes with the isotropic oscillator") {
  const Observable H =
      parse_observable("(p1^2 + p2^2)/2 + (q1^2 + q2^2)/2", 2);
  const Observable L = parse_observable("q1*p2 - q2*p1", 2);
  const Observable b = poisson_bracket(H, L);
  for (const PhasePoint& z : testutil::seeded_points(43, 2, 50))
    CHECK(std::fabs(b(z)) <= 1e-15);
}

TEST_CASE("dimension mismatches are rejected") {
  const Observable f1 = parse_observable("q1", 1);
  const Observable f2 = parse_observable("q1", 2);
  CHECK_THROWS_AS(poisson_bracket(f1, f2), DimMismatch);
  const TangentVector u{{1.0}, {0.0}};
  const TangentVector w{{1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(symplectic_product(u, w), DimMismatch);
  CHECK_THROWS_AS(
      evaluate_field(hamiltonian_vector_field(f2), pt1(0, 0)), DimMismatch);
}
