#ifndef PSI_POISSON_HPP
#define PSI_POISSON_HPP

#include <string>

#include "psi/fields.hpp"

namespace psi {

// dZ/dt = R(Z) grad H(Z) on R^m with R skew-symmetric satisfying the
// compatibility (Jacobi) condition.
template <typename Scalar>
struct PoissonSystem {
  Index dim = 0;
  StructureMatrixField<Scalar> structure;
  ScalarField<Scalar> hamiltonian;
  std::string name;
};

template <typename Scalar>
Vector<Scalar> eval_vector_field(const PoissonSystem<Scalar>& sys, const Vector<Scalar>& z) {
  require_length(z, sys.dim, "eval_vector_field");
  require_finite(z, "eval_vector_field");
  Matrix<Scalar> r = sys.structure(z);
  Vector<Scalar> g = sys.hamiltonian.grad(z);
  require_finite(r, "eval_vector_field: R(z)");
  require_finite(g, "eval_vector_field: grad H(z)");
  return r * g;
}

template <typename Scalar>
Scalar poisson_bracket(const ScalarField<Scalar>& f, const ScalarField<Scalar>& g,
                       const StructureMatrixField<Scalar>& r, const Vector<Scalar>& z) {
  require_length(z, r.dim, "poisson_bracket");
  Vector<Scalar> gf = f.grad(z);
  Vector<Scalar> gg = g.grad(z);
  if (gf.size() != gg.size() || gf.size() != r.dim)
    throw DimensionMismatch("poisson_bracket: gradient lengths disagree with R");
  return gf.dot(r(z) * gg);
}

}  // namespace psi

#endif
