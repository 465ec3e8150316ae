#pragma once

#include <vector>

#include "preq/expr.hpp"
#include "preq/phase_space.hpp"

namespace preq {

/// The Hamiltonian vector field of a generator f on (R^2n, omega0):
/// dq_i/dt = df/dp_i, dp_i/dt = -df/dq_i, both kept as exact symbolic
/// derivatives of the generator.
struct HamiltonianField {
  Observable generator;
  std::vector<Observable> dq;  // df/dp_i
  std::vector<Observable> dp;  // -df/dq_i

  int dimension() const noexcept { return generator.dimension(); }
};

/// A general symbolic vector field on R^2n (not necessarily Hamiltonian).
struct VectorField {
  int n = 0;
  std::vector<Observable> dq;
  std::vector<Observable> dp;
};

HamiltonianField hamiltonian_vector_field(const Observable& f);
VectorField to_vector_field(const HamiltonianField& X);

TangentVector evaluate_field(const HamiltonianField& X, const PhasePoint& z);
TangentVector evaluate_field(const VectorField& X, const PhasePoint& z);

/// omega0(u, v) with omega0 = sum_i dp_i ^ dq_i, i.e.
/// sum_i (u.dp_i * v.dq_i - u.dq_i * v.dp_i).
double symplectic_product(const TangentVector& u, const TangentVector& v);

/// The library's primary bracket {f,g} = omega0(X_f, X_g)
/// = sum_i (df/dp_i dg/dq_i - df/dq_i dg/dp_i). Under this convention
/// [X_f, X_g] = X_{{f,g}} and df/dt = {H,f} hold verbatim.
Observable poisson_bracket(const Observable& f, const Observable& g);

/// The textbook coordinate bracket sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i);
/// equals the negation of poisson_bracket.
Observable canonical_poisson_bracket(const Observable& f, const Observable& g);

/// Symbolic commutator [X, Y] = (X.grad)Y - (Y.grad)X, componentwise.
VectorField field_lie_bracket(const VectorField& X, const VectorField& Y);
VectorField field_lie_bracket(const HamiltonianField& X,
                              const HamiltonianField& Y);

}  // namespace preq
