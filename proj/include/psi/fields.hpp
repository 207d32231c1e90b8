#ifndef PSI_FIELDS_HPP
#define PSI_FIELDS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "psi/types.hpp"

namespace psi {

// Central-difference gradient of a scalar function of a state vector.
template <typename Scalar, typename F>
Vector<Scalar> central_gradient(const F& f, const Vector<Scalar>& z, Scalar step) {
  Vector<Scalar> g(z.size());
  Vector<Scalar> zp = z, zm = z;
  for (Index j = 0; j < z.size(); ++j) {
    const Scalar h = step * (Scalar(1) + std::abs(z[j]));
    zp[j] = z[j] + h;
    zm[j] = z[j] - h;
    g[j] = (f(zp) - f(zm)) / (zp[j] - zm[j]);
    zp[j] = z[j];
    zm[j] = z[j];
  }
  return g;
}

// A scalar function of the state with an optional closed-form gradient.
// Without one, grad() falls back to central differences with step fd_step.
template <typename Scalar>
struct ScalarField {
  std::function<Scalar(const Vector<Scalar>&)> value;
  std::function<Vector<Scalar>(const Vector<Scalar>&)> gradient;  // may be empty
  Scalar fd_step = Scalar(1e-6);

  Scalar operator()(const Vector<Scalar>& z) const { return value(z); }

  Vector<Scalar> grad(const Vector<Scalar>& z) const {
    if (gradient) return gradient(z);
    return central_gradient<Scalar>(value, z, fd_step);
  }

  bool has_closed_gradient() const { return static_cast<bool>(gradient); }
};

// The state-dependent structure matrix R(Z), skew-symmetric by contract.
template <typename Scalar>
struct StructureMatrixField {
  Index dim = 0;
  std::function<Matrix<Scalar>(const Vector<Scalar>&)> evaluate;
  DependencyPattern pattern;  // optional; empty() when not registered

  Matrix<Scalar> operator()(const Vector<Scalar>& z) const {
    require_length(z, dim, "StructureMatrixField");
    return evaluate(z);
  }
};

}  // namespace psi

#endif
