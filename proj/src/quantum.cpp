#include "preq/quantum.hpp"

#include <algorithm>
#include <cmath>

namespace preq {

CMatrix CMatrix::identity(int d) {
  CMatrix m(d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = std::conj((*this)(j, i));
  return out;
}

CMatrix matmul(const CMatrix& A, const CMatrix& B) {
  if (A.d != B.d) throw DimMismatch("matmul: dimensions differ");
  CMatrix C(A.d);
  for (int i = 0; i < A.d; ++i)
    for (int k = 0; k < A.d; ++k) {
      const cplx aik = A(i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < A.d; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

std::vector<cplx> matvec(const CMatrix& A, const std::vector<cplx>& x) {
  if (A.d != static_cast<int>(x.size()))
    throw DimMismatch("matvec: dimensions differ");
  std::vector<cplx> y(x.size(), cplx{});
  for (int i = 0; i < A.d; ++i)
    for (int j = 0; j < A.d; ++j) y[i] += A(i, j) * x[j];
  return y;
}

double max_abs_diff(const CMatrix& A, const CMatrix& B) {
  if (A.d != B.d) throw DimMismatch("max_abs_diff: dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < A.a.size(); ++i)
    m = std::max(m, std::abs(A.a[i] - B.a[i]));
  return m;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const cplx& v : a) s += std::norm(v);
  return std::sqrt(s);
}

bool StateVector::is_unit(double tol) const {
  return std::fabs(norm() - 1.0) <= tol;
}

cplx inner(const StateVector& x, const StateVector& y) {
  if (x.dim() != y.dim()) throw DimMismatch("inner: dimensions differ");
  cplx s{};
  for (int i = 0; i < x.dim(); ++i) s += std::conj(x.a[i]) * y.a[i];
  return s;
}

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  const int d = m_.d;
  if (d <= 0 || m_.a.size() != std::size_t(d) * d)
    throw DimMismatch("HermitianMatrix: malformed storage");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (std::abs(m_(i, j) - std::conj(m_(j, i))) > 1e-12)
        throw ConfigError("matrix is not Hermitian within 1e-12 at entry (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
  for (int i = 0; i < d; ++i) {
    m_(i, i) = cplx{m_(i, i).real(), 0.0};
    for (int j = i + 1; j < d; ++j) {
      const cplx v = (m_(i, j) + std::conj(m_(j, i))) / 2.0;
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

std::vector<cplx> schrodinger_field(const CMatrix& M, const StateVector& psi,
                                    double hbar) {
  if (M.d != psi.dim()) throw DimMismatch("schrodinger_field: dimensions differ");
  std::vector<cplx> y = matvec(M, psi.a);
  const cplx scale{0.0, 1.0 / hbar};
  for (cplx& v : y) v *= scale;
  return y;
}

std::vector<cplx> schrodinger_field(const HermitianMatrix& H,
                                    const StateVector& psi, double hbar) {
  return schrodinger_field(H.matrix(), psi, hbar);
}

EigenDecomposition jacobi_eigen(const HermitianMatrix& H) {
  const int d = H.dim();
  CMatrix A = H.matrix();
  CMatrix V = CMatrix::identity(d);

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
  };

  constexpr double kOffTol = 1e-12;
  constexpr int kSweepCap = 100;
  int sweeps = 0;
  while (off_norm() > kOffTol) {
    if (sweeps++ >= kSweepCap)
      throw NoConvergence("Jacobi sweeps exceeded " +
                          std::to_string(kSweepCap));
    for (int p = 0; p < d - 1; ++p)
      for (int q = p + 1; q < d; ++q) {
        const cplx beta = A(p, q);
        const double b = std::abs(beta);
        if (b == 0.0) continue;
        // Unitary U = [[c, -conj(s)], [s, c]] on the (p, q) plane with
        // s = sigma e^{-i phi}, e^{i phi} = beta/|beta|, zeroing A(p, q).
        const double tau = (A(q, q).real() - A(p, p).real()) / (2 * b);
        const double t =
            (tau >= 0 ? -1.0 : 1.0) / (std::fabs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sigma = t * c;
        const cplx phase = beta / b;
        const cplx s = sigma * std::conj(phase);

        // rows p, q: A <- U^dagger A
        for (int k = 0; k < d; ++k) {
          const cplx apk = A(p, k);
          const cplx aqk = A(q, k);
          A(p, k) = c * apk + std::conj(s) * aqk;
          A(q, k) = -s * apk + c * aqk;
        }
        // columns p, q: A <- A U, V <- V U
        for (int k = 0; k < d; ++k) {
          const cplx akp = A(k, p);
          const cplx akq = A(k, q);
          A(k, p) = c * akp + s * akq;
          A(k, q) = -std::conj(s) * akp + c * akq;
          const cplx vkp = V(k, p);
          const cplx vkq = V(k, q);
          V(k, p) = c * vkp + s * vkq;
          V(k, q) = -std::conj(s) * vkp + c * vkq;
        }
      }
  }

  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return A(i, i).real() < A(j, j).real();
  });
  EigenDecomposition out;
  out.sweeps = sweeps;
  out.eigenvalues.resize(d);
  out.vectors = CMatrix(d);
  for (int j = 0; j < d; ++j) {
    out.eigenvalues[j] = A(order[j], order[j]).real();
    for (int i = 0; i < d; ++i) out.vectors(i, j) = V(i, order[j]);
  }
  return out;
}

CMatrix propagator(const HermitianMatrix& H, double t, double hbar) {
  if (t == 0.0) return CMatrix::identity(H.dim());
  const EigenDecomposition eig = jacobi_eigen(H);
  const int d = H.dim();
  std::vector<cplx> phases(d);
  for (int k = 0; k < d; ++k) {
    const double ang = t * eig.eigenvalues[k] / hbar;
    phases[k] = {std::cos(ang), std::sin(ang)};
  }
  CMatrix U(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx s{};
      for (int k = 0; k < d; ++k)
        s += eig.vectors(i, k) * phases[k] * std::conj(eig.vectors(j, k));
      U(i, j) = s;
    }
  return U;
}

StateVector propagate(const HermitianMatrix& H, const StateVector& psi0,
                      double t, double hbar) {
  if (H.dim() != psi0.dim()) throw DimMismatch("propagate: dimensions differ");
  if (!psi0.is_unit())
    throw ConfigError("propagate: psi0 is not a unit vector");
  if (t == 0.0) return psi0;
  const EigenDecomposition eig = jacobi_eigen(H);
  const int d = H.dim();
  // V diag(e^{i t lambda / hbar}) V^dagger psi0
  std::vector<cplx> c(d, cplx{});
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      c[k] += std::conj(eig.vectors(i, k)) * psi0.a[i];
  for (int k = 0; k < d; ++k) {
    const double ang = t * eig.eigenvalues[k] / hbar;
    c[k] *= cplx{std::cos(ang), std::sin(ang)};
  }
  StateVector out;
  out.a.assign(d, cplx{});
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) out.a[i] += eig.vectors(i, k) * c[k];
  return out;
}

double tangency_defect(const CMatrix& M, const StateVector& psi, double hbar) {
  const std::vector<cplx> field = schrodinger_field(M, psi, hbar);
  cplx s{};
  for (int i = 0; i < psi.dim(); ++i) s += std::conj(psi.a[i]) * field[i];
  return std::fabs(s.real());
}

double tangency_defect(const HermitianMatrix& H, const StateVector& psi,
                       double hbar) {
  return tangency_defect(H.matrix(), psi, hbar);
}

double projective_distance(const StateVector& psi, const StateVector& phi) {
  if (psi.dim() != phi.dim())
    throw DimMismatch("projective_distance: dimensions differ");
  const cplx o = inner(psi, phi);
  const double mag = std::abs(o);
  const cplx align = mag == 0.0 ? cplx{1.0, 0.0} : std::conj(o) / mag;
  double s = 0.0;
  for (int i = 0; i < psi.dim(); ++i) s += std::norm(psi.a[i] - align * phi.a[i]);
  return std::sqrt(s);
}

double unitarity_defect(const HermitianMatrix& H, double t, double hbar) {
  const CMatrix U = propagator(H, t, hbar);
  return max_abs_diff(matmul(U.adjoint(), U), CMatrix::identity(H.dim()));
}

}  // namespace preq
