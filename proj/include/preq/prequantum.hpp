#pragma once

#include <complex>
#include <span>

#include "preq/parallel.hpp"
#include "preq/symplectic.hpp"

namespace preq {

/// A complex-valued phase-space function in the fixed global trivialization,
/// stored as a pair of symbolic observables.
struct Section {
  Observable re;
  Observable im;

  int dimension() const noexcept { return re.dimension(); }
};

Section make_section(Observable re, Observable im);
Section section_zero(int n);

Section add(const Section& a, const Section& b);
Section sub(const Section& a, const Section& b);
Section scale(std::complex<double> c, const Section& s);
Section multiply(const Observable& f, const Section& s);
Section simplify(const Section& s);

std::complex<double> evaluate(const Section& s, const PhasePoint& z);

/// Covariant derivative in the fixed gauge with potential theta0 = p . dr:
/// nabla_X s = X(s) - (i/hbar) theta0(X) s. Its curvature form is omega0.
Section covariant_derivative(const HamiltonianField& X, const Section& s,
                             double hbar);

/// The Kostant-Souriau operator of a generator f at Planck constant hbar:
/// apply(s) = -i hbar nabla_{X_f} s + f s.
struct PrequantumOperator {
  Observable generator;
  double hbar = 1.0;
};

Section apply_prequantum(const PrequantumOperator& op, const Section& s);

/// Max over the sample points of |Omega({f,g}) s - (i/hbar)[Omega(f),
/// Omega(g)] s| (omega-bracket convention; both sides built symbolically).
double dirac_residual(const Observable& f, const Observable& g,
                      const Section& s, std::span<const PhasePoint> points,
                      double hbar, ExecMode mode = default_exec());

/// <a, b> = integral of conj(a) b over [-L, L]^2 (n = 1 only), tensor-product
/// Simpson with m odd points per axis and a fixed summation order.
std::complex<double> l2_inner_product(const Section& a, const Section& b,
                                      double half_width, int grid_points,
                                      ExecMode mode = default_exec());

/// |<Omega(f) s1, s2> - <s1, Omega(f) s2>| on the Simpson grid. Both sections
/// must carry a decaying exp factor (Gaussian-type) in every nonzero
/// component; plain polynomials are rejected with NonDecayingSection.
double symmetry_defect(const Observable& f, const Section& s1,
                       const Section& s2, double half_width, int grid_points,
                       double hbar, ExecMode mode = default_exec());

}  // namespace preq
