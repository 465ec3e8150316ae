#include "preq/symplectic.hpp"

namespace preq {

namespace {

void check_same_dimension(int a, int b, const char* what) {
  if (a != b)
    throw DimMismatch(std::string(what) + ": dimensions " + std::to_string(a) +
                      " and " + std::to_string(b) + " differ");
}

}  // namespace

HamiltonianField hamiltonian_vector_field(const Observable& f) {
  const int n = f.dimension();
  std::vector<Observable> dq, dp;
  dq.reserve(n);
  dp.reserve(n);
  for (int i = 1; i <= n; ++i) {
    dq.push_back(differentiate(f, VarKind::p, i));
    dp.push_back(Observable(
        n, fold_negate(differentiate(f, VarKind::q, i).root())));
  }
  return {f, std::move(dq), std::move(dp)};
}

VectorField to_vector_field(const HamiltonianField& X) {
  return {X.dimension(), X.dq, X.dp};
}

TangentVector evaluate_field(const HamiltonianField& X, const PhasePoint& z) {
  check_same_dimension(X.dimension(), z.dimension(), "evaluate_field");
  TangentVector v;
  v.dq.reserve(X.dq.size());
  v.dp.reserve(X.dp.size());
  for (const Observable& c : X.dq) v.dq.push_back(c(z));
  for (const Observable& c : X.dp) v.dp.push_back(c(z));
  return v;
}

TangentVector evaluate_field(const VectorField& X, const PhasePoint& z) {
  check_same_dimension(X.n, z.dimension(), "evaluate_field");
  TangentVector v;
  v.dq.reserve(X.dq.size());
  v.dp.reserve(X.dp.size());
  for (const Observable& c : X.dq) v.dq.push_back(c(z));
  for (const Observable& c : X.dp) v.dp.push_back(c(z));
  return v;
}

double symplectic_product(const TangentVector& u, const TangentVector& v) {
  check_same_dimension(u.dimension(), v.dimension(), "symplectic_product");
  double s = 0.0;
  for (int i = 0; i < u.dimension(); ++i)
    s += u.dp[i] * v.dq[i] - u.dq[i] * v.dp[i];
  return s;
}

namespace {

// sum_i (df/dA_i * dg/dB_i - df/dB_i * dg/dA_i), shared by both conventions.
Observable bracket_sum(const Observable& f, const Observable& g, VarKind A,
                       VarKind B) {
  check_same_dimension(f.dimension(), g.dimension(), "poisson_bracket");
  const int n = f.dimension();
  ExprPtr acc = expr_constant(0.0);
  for (int i = 1; i <= n; ++i) {
    const ExprPtr term =
        fold_sub(fold_mul(differentiate(f, A, i).root(),
                          differentiate(g, B, i).root()),
                 fold_mul(differentiate(f, B, i).root(),
                          differentiate(g, A, i).root()));
    acc = fold_add(acc, term);
  }
  return Observable(n, acc);
}

}  // namespace

Observable poisson_bracket(const Observable& f, const Observable& g) {
  return bracket_sum(f, g, VarKind::p, VarKind::q);
}

Observable canonical_poisson_bracket(const Observable& f, const Observable& g) {
  return bracket_sum(f, g, VarKind::q, VarKind::p);
}

namespace {

// (X.grad)h = sum_j (Xq_j dh/dq_j + Xp_j dh/dp_j)
Observable advect(const VectorField& X, const Observable& h) {
  ExprPtr acc = expr_constant(0.0);
  for (int j = 1; j <= X.n; ++j) {
    acc = fold_add(acc, fold_mul(X.dq[j - 1].root(),
                                 differentiate(h, VarKind::q, j).root()));
    acc = fold_add(acc, fold_mul(X.dp[j - 1].root(),
                                 differentiate(h, VarKind::p, j).root()));
  }
  return Observable(X.n, acc);
}

}  // namespace

VectorField field_lie_bracket(const VectorField& X, const VectorField& Y) {
  check_same_dimension(X.n, Y.n, "field_lie_bracket");
  VectorField out;
  out.n = X.n;
  out.dq.reserve(X.n);
  out.dp.reserve(X.n);
  for (int i = 0; i < X.n; ++i)
    out.dq.push_back(Observable(
        X.n, fold_sub(advect(X, Y.dq[i]).root(), advect(Y, X.dq[i]).root())));
  for (int i = 0; i < X.n; ++i)
    out.dp.push_back(Observable(
        X.n, fold_sub(advect(X, Y.dp[i]).root(), advect(Y, X.dp[i]).root())));
  return out;
}

VectorField field_lie_bracket(const HamiltonianField& X,
                              const HamiltonianField& Y) {
  return field_lie_bracket(to_vector_field(X), to_vector_field(Y));
}

}  // namespace preq
