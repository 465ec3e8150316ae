#include "preq/prequantum.hpp"

#include <cmath>

namespace preq {

namespace {

void check_same_dimension(int a, int b, const char* what) {
  if (a != b)
    throw DimMismatch(std::string(what) + ": dimensions " + std::to_string(a) +
                      " and " + std::to_string(b) + " differ");
}

}  // namespace

Section make_section(Observable re, Observable im) {
  check_same_dimension(re.dimension(), im.dimension(), "make_section");
  return {std::move(re), std::move(im)};
}

Section section_zero(int n) {
  return {Observable(n, expr_constant(0.0)), Observable(n, expr_constant(0.0))};
}

Section add(const Section& a, const Section& b) {
  check_same_dimension(a.dimension(), b.dimension(), "section add");
  const int n = a.dimension();
  return {Observable(n, fold_add(a.re.root(), b.re.root())),
          Observable(n, fold_add(a.im.root(), b.im.root()))};
}

Section sub(const Section& a, const Section& b) {
  check_same_dimension(a.dimension(), b.dimension(), "section sub");
  const int n = a.dimension();
  return {Observable(n, fold_sub(a.re.root(), b.re.root())),
          Observable(n, fold_sub(a.im.root(), b.im.root()))};
}

Section scale(std::complex<double> c, const Section& s) {
  const int n = s.dimension();
  const ExprPtr cr = expr_constant(c.real());
  const ExprPtr ci = expr_constant(c.imag());
  // (cr + i ci)(re + i im) = (cr re - ci im) + i (cr im + ci re)
  return {Observable(n, fold_sub(fold_mul(cr, s.re.root()),
                                 fold_mul(ci, s.im.root()))),
          Observable(n, fold_add(fold_mul(cr, s.im.root()),
                                 fold_mul(ci, s.re.root())))};
}

Section multiply(const Observable& f, const Section& s) {
  check_same_dimension(f.dimension(), s.dimension(), "section multiply");
  const int n = s.dimension();
  const ExprPtr fr = simplify(f).root();
  return {Observable(n, fold_mul(fr, s.re.root())),
          Observable(n, fold_mul(fr, s.im.root()))};
}

Section simplify(const Section& s) {
  return {simplify(s.re), simplify(s.im)};
}

std::complex<double> evaluate(const Section& s, const PhasePoint& z) {
  return {s.re(z), s.im(z)};
}

namespace {

// X(g) = sum_i (Xq_i dg/dq_i + Xp_i dg/dp_i)
ExprPtr directional_derivative(const HamiltonianField& X, const Observable& g) {
  ExprPtr acc = expr_constant(0.0);
  for (int i = 1; i <= X.dimension(); ++i) {
    acc = fold_add(acc, fold_mul(X.dq[i - 1].root(),
                                 differentiate(g, VarKind::q, i).root()));
    acc = fold_add(acc, fold_mul(X.dp[i - 1].root(),
                                 differentiate(g, VarKind::p, i).root()));
  }
  return acc;
}

// theta0(X) = sum_i p_i Xq_i
ExprPtr potential_pairing(const HamiltonianField& X) {
  ExprPtr acc = expr_constant(0.0);
  for (int i = 1; i <= X.dimension(); ++i)
    acc = fold_add(acc, fold_mul(expr_variable(VarKind::p, i),
                                 X.dq[i - 1].root()));
  return acc;
}

}  // namespace

Section covariant_derivative(const HamiltonianField& X, const Section& s,
                             double hbar) {
  check_same_dimension(X.dimension(), s.dimension(), "covariant_derivative");
  const int n = s.dimension();
  // -(i/hbar) theta0(X) (re + i im) = (theta0/hbar) im - i (theta0/hbar) re
  const ExprPtr u = fold_mul(expr_constant(1.0 / hbar), potential_pairing(X));
  return {Observable(n, fold_add(directional_derivative(X, s.re),
                                 fold_mul(u, s.im.root()))),
          Observable(n, fold_sub(directional_derivative(X, s.im),
                                 fold_mul(u, s.re.root())))};
}

Section apply_prequantum(const PrequantumOperator& op, const Section& s) {
  check_same_dimension(op.generator.dimension(), s.dimension(),
                       "apply_prequantum");
  const int n = s.dimension();
  const HamiltonianField X = hamiltonian_vector_field(op.generator);
  const Section nabla = covariant_derivative(X, s, op.hbar);
  const ExprPtr h = expr_constant(op.hbar);
  const ExprPtr f = simplify(op.generator).root();
  // -i hbar (R + i I) + f s = (hbar I + f re) + i (f im - hbar R)
  return {Observable(n, fold_add(fold_mul(h, nabla.im.root()),
                                 fold_mul(f, s.re.root()))),
          Observable(n, fold_sub(fold_mul(f, s.im.root()),
                                 fold_mul(h, nabla.re.root())))};
}

double dirac_residual(const Observable& f, const Observable& g,
                      const Section& s, std::span<const PhasePoint> points,
                      double hbar, ExecMode mode) {
  check_same_dimension(f.dimension(), g.dimension(), "dirac_residual");
  const PrequantumOperator of{f, hbar};
  const PrequantumOperator og{g, hbar};
  const Section left = apply_prequantum({poisson_bracket(f, g), hbar}, s);
  const Section commutator = sub(apply_prequantum(of, apply_prequantum(og, s)),
                                 apply_prequantum(og, apply_prequantum(of, s)));
  const Section right = scale({0.0, 1.0 / hbar}, commutator);
  const Section diff = sub(left, right);
  return chunked_max(
      points.size(),
      [&](std::size_t i) { return std::abs(evaluate(diff, points[i])); }, mode);
}

namespace {

// Looks for a multiplicative exp factor whose argument is strongly negative
// and still decreasing at the probe radii; a Gaussian-type decay guard, not a
// general decay proof.
bool factor_decays(const ExprPtr& e) {
  if (e->kind == ExprKind::mul)
    return factor_decays(e->a) || factor_decays(e->b);
  if (e->kind == ExprKind::negate) return factor_decays(e->a);
  if (e->kind == ExprKind::div) return factor_decays(e->a);
  if (e->kind != ExprKind::call || e->func != Func::exp) return false;
  const Observable arg(1, e->a);
  static const double dirs[8][2] = {{1, 0},  {0, 1},  {-1, 0}, {0, -1},
                                    {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& d : dirs) {
    const double norm = std::hypot(d[0], d[1]);
    const PhasePoint near{{4 * d[0] / norm}, {4 * d[1] / norm}};
    const PhasePoint far{{8 * d[0] / norm}, {8 * d[1] / norm}};
    double a_near, a_far;
    try {
      a_near = arg(near);
      a_far = arg(far);
    } catch (const DomainError&) {
      return false;
    }
    if (!(a_far < a_near) || !(a_far <= -4.0)) return false;
  }
  return true;
}

bool component_decays(const Observable& f) {
  const ExprPtr root = simplify(f).root();
  if (is_constant(root, 0.0)) return true;
  return factor_decays(root);
}

}  // namespace

std::complex<double> l2_inner_product(const Section& a, const Section& b,
                                      double half_width, int grid_points,
                                      ExecMode mode) {
  check_same_dimension(a.dimension(), b.dimension(), "l2_inner_product");
  if (a.dimension() != 1)
    throw DimMismatch("l2_inner_product is defined for n = 1 only");
  if (grid_points < 3 || grid_points % 2 == 0)
    throw EvenGridError("Simpson grid needs an odd point count >= 3, got " +
                        std::to_string(grid_points));
  const int m = grid_points;
  const double h = 2 * half_width / (m - 1);
  auto node = [&](int i) { return -half_width + i * h; };
  auto weight = [&](int i) {
    if (i == 0 || i == m - 1) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
  };
  const std::complex<double> sum = chunked_sum<std::complex<double>>(
      static_cast<std::size_t>(m) * m,
      [&](std::size_t idx) {
        const int iq = static_cast<int>(idx / m);
        const int ip = static_cast<int>(idx % m);
        const PhasePoint z{{node(iq)}, {node(ip)}};
        const std::complex<double> val =
            std::conj(evaluate(a, z)) * evaluate(b, z);
        return weight(iq) * weight(ip) * val;
      },
      mode);
  return sum * (h / 3) * (h / 3);
}

double symmetry_defect(const Observable& f, const Section& s1,
                       const Section& s2, double half_width, int grid_points,
                       double hbar, ExecMode mode) {
  if (f.dimension() != 1 || s1.dimension() != 1 || s2.dimension() != 1)
    throw DimMismatch("symmetry_defect is defined for n = 1 only");
  for (const Section* s : {&s1, &s2})
    if (!component_decays(s->re) || !component_decays(s->im))
      throw NonDecayingSection(
          "section lacks a decaying exp factor; the L2 pairing needs "
          "Gaussian-type decay");
  const PrequantumOperator op{f, hbar};
  const Section op_s1 = apply_prequantum(op, s1);
  const Section op_s2 = apply_prequantum(op, s2);
  const std::complex<double> lhs =
      l2_inner_product(op_s1, s2, half_width, grid_points, mode);
  const std::complex<double> rhs =
      l2_inner_product(s1, op_s2, half_width, grid_points, mode);
  return std::abs(lhs - rhs);
}

}  // namespace preq
