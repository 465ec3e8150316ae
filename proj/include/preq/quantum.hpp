#pragma once

#include <complex>
#include <vector>

#include "preq/errors.hpp"

namespace preq {

using cplx = std::complex<double>;

/// Small dense complex matrix, row-major.
struct CMatrix {
  int d = 0;
  std::vector<cplx> a;

  CMatrix() = default;
  explicit CMatrix(int dim) : d(dim), a(std::size_t(dim) * dim, cplx{}) {}
  cplx& operator()(int i, int j) { return a[std::size_t(i) * d + j]; }
  cplx operator()(int i, int j) const { return a[std::size_t(i) * d + j]; }

  static CMatrix identity(int d);
  CMatrix adjoint() const;
};

CMatrix matmul(const CMatrix& A, const CMatrix& B);
std::vector<cplx> matvec(const CMatrix& A, const std::vector<cplx>& x);
double max_abs_diff(const CMatrix& A, const CMatrix& B);

/// Finite-dimensional quantum state.
struct StateVector {
  std::vector<cplx> a;

  int dim() const noexcept { return static_cast<int>(a.size()); }
  double norm() const;
  bool is_unit(double tol = 1e-12) const;
};

cplx inner(const StateVector& x, const StateVector& y);  // conj(x) . y

/// Validated Hermitian matrix: entrywise |A - A^dagger| <= 1e-12 is required,
/// then the stored matrix is symmetrized to (A + A^dagger)/2 exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix m);

  int dim() const noexcept { return m_.d; }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  CMatrix m_;
};

/// Schrodinger vector field (i/hbar) M psi. The CMatrix overload exists so
/// tests can probe non-Hermitian generators.
std::vector<cplx> schrodinger_field(const CMatrix& M, const StateVector& psi,
                                    double hbar);
std::vector<cplx> schrodinger_field(const HermitianMatrix& H,
                                    const StateVector& psi, double hbar);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  CMatrix vectors;                  // columns; H V = V diag(eigenvalues)
  int sweeps = 0;
};

/// Cyclic Jacobi sweeps with complex rotations; converged when the
/// off-diagonal Frobenius norm is <= 1e-12 (cap 100 sweeps).
EigenDecomposition jacobi_eigen(const HermitianMatrix& H);

/// U(t) = V diag(exp(i t lambda_k / hbar)) V^dagger (the source convention
/// H psi = -i hbar dpsi/dt, hence the + sign in the exponent).
CMatrix propagator(const HermitianMatrix& H, double t, double hbar);

/// psi(t) = U(t) psi0; psi0 must be unit.
StateVector propagate(const HermitianMatrix& H, const StateVector& psi0,
                      double t, double hbar);

/// |Re <psi, (i/hbar) M psi>|; zero iff the field is tangent to the unit
/// sphere at psi.
double tangency_defect(const CMatrix& M, const StateVector& psi, double hbar);
double tangency_defect(const HermitianMatrix& H, const StateVector& psi,
                       double hbar);

/// min over theta of ||psi - e^{i theta} phi||_2, equal to
/// sqrt(max(0, 2 - 2|<psi,phi>|)) for unit vectors. Computed as the
/// phase-aligned residual norm, which stays accurate near zero.
double projective_distance(const StateVector& psi, const StateVector& phi);

/// max-norm of U(t)^dagger U(t) - I.
double unitarity_defect(const HermitianMatrix& H, double t, double hbar);

}  // namespace preq
