#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "preq/expr.hpp"
#include "preq/parallel.hpp"
#include "test_util.hpp"

using namespace preq;
using testutil::pt1;

namespace {

int count_variable_leaves(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::variable: return 1;
    case ExprKind::constant:
    case ExprKind::pi_const: return 0;
    case ExprKind::negate:
    case ExprKind::pow_int:
    case ExprKind::call: return count_variable_leaves(e->a);
    default: return count_variable_leaves(e->a) + count_variable_leaves(e->b);
  }
}

struct CorpusEntry {
  const char* text;
  int n;
};

// Mirrors the expression set the verification suite uses; domain-safe on
// [-2, 2]^2n.
const CorpusEntry kCorpus[] = {
    {"(p1^2 + q1^2)/2", 1},
    {"q1*p1", 1},
    {"sin(q1)*cos(p1)", 1},
    {"exp(q1/2) + ln(p1^2 + 3)", 1},
    {"sqrt(q1^2 + 2)*p1", 1},
    {"q1^3 - 2*q1*p1^2 + p1", 1},
    {"(q1^2 + 1)^-2", 1},
    {"pi*q1 + sin(pi*p1)", 1},
    {"-q1 + (-p1)^3", 1},
    {"q1*p2 - q2*p1", 2},
    {"(p1^2 + p2^2)/2 + (q1^2 + q2^2)/2", 2},
    {"sin(q1)*exp(p2/2) + q2^2*p1", 2},
};

}  // namespace

TEST_CASE("parse: oscillator expression has two variable leaves") {
  const Observable f = parse_observable("(p1^2 + q1^2)/2", 1);
  CHECK(f.dimension() == 1);
  CHECK(count_variable_leaves(f.root()) == 2);
}

TEST_CASE("parse: out-of-range variable") {
  CHECK_THROWS_AS(parse_observable("q3", 2), UnknownVariable);
  CHECK_THROWS_AS(parse_observable("p5", 4), UnknownVariable);
  CHECK_THROWS_AS(parse_observable("q0", 2), UnknownVariable);
  CHECK_NOTHROW(parse_observable("q2", 2));
}

TEST_CASE("parse: unbalanced paren fails at end of input") {
  try {
    parse_observable("sin(q1", 1);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("parse: error taxonomy") {
  CHECK_THROWS_AS(parse_observable("tan(q1)", 1), UnknownFunction);
  CHECK_THROWS_AS(parse_observable("x + 1", 1), UnknownVariable);
  CHECK_THROWS_AS(parse_observable("q1^2.5", 1), NonIntegerExponent);
  CHECK_THROWS_AS(parse_observable("q1^p1", 1), NonIntegerExponent);
  CHECK_THROWS_AS(parse_observable("q1^pi", 1), NonIntegerExponent);
  CHECK_THROWS_AS(parse_observable("", 1), SyntaxError);
  CHECK_THROWS_AS(parse_observable("q1 +", 1), SyntaxError);
  CHECK_THROWS_AS(parse_observable("(q1))", 1), SyntaxError);
  CHECK_THROWS_AS(parse_observable("1 @ 2", 1), SyntaxError);
}

TEST_CASE("parse: precedence and associativity") {
  // mul binds tighter than add
  CHECK(parse_observable("2*q1 + p1", 1)(pt1(3, 5)) == 11.0);
  // left-associative subtraction/division
  CHECK(parse_observable("q1 - p1 - 1", 1)(pt1(5, 2)) == 2.0);
  CHECK(parse_observable("8/q1/p1", 1)(pt1(2, 2)) == 2.0);
  // pow binds tighter than mul
  CHECK(parse_observable("2*q1^3", 1)(pt1(2, 0)) == 16.0);
  // pow is right-associative: q1^(2^3)
  CHECK(parse_observable("q1^2^3", 1)(pt1(2, 0)) == 256.0);
  // unary minus binds tighter than pow: (-q1)^2
  CHECK(parse_observable("-q1^2", 1)(pt1(3, 0)) == 9.0);
  // negative and folded exponents
  CHECK(parse_observable("q1^-2", 1)(pt1(2, 0)) == 0.25);
  CHECK(parse_observable("q1^(1+2)", 1)(pt1(2, 0)) == 8.0);
  // whitespace is insignificant
  CHECK(parse_observable("  q1   *p1 ", 1)(pt1(2, 3)) ==
        parse_observable("q1*p1", 1)(pt1(2, 3)));
}

TEST_CASE("evaluate: worked values") {
  CHECK(parse_observable("(p1^2 + q1^2)/2", 1)(pt1(1, 0)) == 0.5);
  CHECK(parse_observable("1", 1)(pt1(-3, 7)) == 1.0);
  CHECK(parse_observable("q1*p1", 1)(pt1(2, 3)) == 6.0);
  CHECK(parse_observable("pi", 1)(pt1(0, 0)) == std::numbers::pi);
}

TEST_CASE("evaluate: domain errors carry the offending subexpression") {
  CHECK_THROWS_AS(parse_observable("1/q1", 1)(pt1(0, 0)), DomainError);
  CHECK_THROWS_AS(parse_observable("ln(q1)", 1)(pt1(-1, 0)), DomainError);
  CHECK_THROWS_AS(parse_observable("ln(q1)", 1)(pt1(0, 0)), DomainError);
  CHECK_THROWS_AS(parse_observable("sqrt(q1)", 1)(pt1(-4, 0)), DomainError);
  CHECK_THROWS_AS(parse_observable("q1^-1", 1)(pt1(0, 0)), DomainError);
  try {
    parse_observable("p1 + 1/(q1 - 1)", 1)(pt1(1, 0));
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.subexpression().find("q1") != std::string::npos);
  }
}

TEST_CASE("evaluate: dimension mismatch") {
  const Observable f = parse_observable("q1", 2);
  CHECK_THROWS_AS(f(pt1(1, 1)), DimMismatch);
}

TEST_CASE("differentiate: textbook cases") {
  CHECK(to_string(differentiate(parse_observable("q1^2", 1), VarKind::q, 1)) ==
        "(2 * q1)");
  CHECK(to_string(differentiate(parse_observable("sin(q1)", 1), VarKind::q, 1)) ==
        "cos(q1)");
  CHECK(to_string(differentiate(parse_observable("q1*p1", 1), VarKind::p, 1)) ==
        "q1");
  // chain rule through composite arguments
  const Observable f = parse_observable("exp(q1^2)", 1);
  const Observable df = differentiate(f, VarKind::q, 1);
  const double q = 0.7;
  CHECK(df(pt1(q, 0)) == doctest::Approx(2 * q * std::exp(q * q)).epsilon(1e-14));
  CHECK_THROWS_AS(differentiate(parse_observable("q1", 1), VarKind::q, 2),
                  UnknownVariable);
}

TEST_CASE("differentiate: sqrt and ln rules") {
  const Observable s = parse_observable("sqrt(q1^2 + 2)", 1);
  const Observable ds = differentiate(s, VarKind::q, 1);
  const double q = 1.3;
  CHECK(ds(pt1(q, 0)) ==
        doctest::Approx(q / std::sqrt(q * q + 2)).epsilon(1e-14));
  const Observable l = parse_observable("ln(p1^2 + 3)", 1);
  const Observable dl = differentiate(l, VarKind::p, 1);
  const double p = -0.4;
  CHECK(dl(pt1(0, p)) == doctest::Approx(2 * p / (p * p + 3)).epsilon(1e-14));
}

TEST_CASE("simplify: rewrite list") {
  CHECK(to_string(simplify(parse_observable("0*p1 + q1", 1))) == "q1");
  CHECK(to_string(simplify(parse_observable("q1^0", 1))) == "1");
  CHECK(to_string(simplify(parse_observable("(2+3)*q1", 1))) == "(5 * q1)");
  CHECK(to_string(simplify(parse_observable("q1^1", 1))) == "q1");
  CHECK(to_string(simplify(parse_observable("q1 - q1", 1))) == "0");
  CHECK(to_string(simplify(parse_observable("--q1", 1))) == "q1");
  CHECK(to_string(simplify(parse_observable("q1/1", 1))) == "q1");
}

TEST_CASE("simplify: idempotent and value-preserving on the corpus") {
  for (const CorpusEntry& entry : kCorpus) {
    const Observable f = parse_observable(entry.text, entry.n);
    const Observable s1 = simplify(f);
    const Observable s2 = simplify(s1);
    CHECK(to_string(s1) == to_string(s2));
    for (const PhasePoint& z : testutil::seeded_points(7, entry.n, 25)) {
      CHECK(s1(z) == f(z));  // exact rewrites only
    }
  }
}

TEST_CASE("print/parse round trip evaluates identically") {
  for (const CorpusEntry& entry : kCorpus) {
    const Observable f = parse_observable(entry.text, entry.n);
    const Observable g = parse_observable(to_string(f), entry.n);
    for (const PhasePoint& z : testutil::seeded_points(11, entry.n, 25))
      CHECK(f(z) == g(z));
    // and the derivative, which exercises folded constants
    const Observable df = differentiate(f, VarKind::p, 1);
    const Observable dg = parse_observable(to_string(df), entry.n);
    for (const PhasePoint& z : testutil::seeded_points(13, entry.n, 10))
      CHECK(df(z) == dg(z));
  }
}

TEST_CASE("symbolic derivative agrees with the finite-difference oracle") {
  double worst = 0.0;
  for (const CorpusEntry& entry : kCorpus) {
    const Observable f = parse_observable(entry.text, entry.n);
    const std::vector<PhasePoint> pts = testutil::seeded_points(42, entry.n, 50);
    for (int i = 1; i <= entry.n; ++i)
      for (const VarKind var : {VarKind::q, VarKind::p}) {
        const Observable d = differentiate(f, var, i);
        for (const PhasePoint& z : pts) {
          const double fd = testutil::central_difference(f, z, var, i, 1e-5);
          const double rel =
              std::fabs(d(z) - fd) / std::max(1.0, std::fabs(fd));
          worst = std::max(worst, rel);
        }
      }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("constant printing round-trips doubles exactly") {
  const double values[] = {0.5, 1.0 / 3.0, std::numbers::pi, 1e-17,
                           -123456.789012345678, 2.2250738585072014e-308};
  for (const double v : values) {
    const Observable f(1, expr_constant(v));
    CHECK(parse_observable(to_string(f), 1)(pt1(0, 0)) == v);
  }
}

TEST_CASE("observables are safe for concurrent evaluation") {
  // parse once, evaluate from several threads; values must match the serial
  // ones bit for bit
  const Observable f = parse_observable("sin(q1)*exp(p1/2) + q1^3", 1);
  const std::vector<PhasePoint> pts = testutil::seeded_points(3, 1, 4096);
  std::vector<double> expected(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) expected[i] = f(pts[i]);
  std::vector<double> got(pts.size());
  preq::parallel_for(
      pts.size(), [&](std::size_t i) { got[i] = f(pts[i]); },
      ExecMode::parallel);
  CHECK(got == expected);
}
