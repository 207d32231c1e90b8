#ifndef PSI_GYROCENTER_HPP
#define PSI_GYROCENTER_HPP

#include <cmath>
#include <functional>
#include <string>

#include "psi/probe.hpp"
#include "psi/splitting.hpp"

namespace psi {

// 4-D gyrocenter system, state Z = (x, y, z, u) with parallel velocity u:
//   K(Z) dZ/dt = grad H(Z),  H = u^2/2 + mu |B(X)| + phi(X),
// and, where K is invertible, the Poisson form dZ/dt = R(Z) grad H with
//   R(Z) = (1/D) [[0, -b3, b2, a23], [b3, 0, -b1, -a13],
//                 [-b2, b1, 0, a12], [-a23, a13, -a12, 0]],
//   D = a12 b3 - a13 b2 + a23 b1.
// The a-entries combine the curl of A with parallel-velocity corrections:
//   a12 = B3 + u (db2/dx - db1/dy), a13 = -B2 + u (db3/dx - db1/dz),
//   a23 = B1 + u (db3/dy - db2/dz).
template <typename Scalar>
struct GyrocenterSystem {
  using Vec3 = Eigen::Vector3<Scalar>;
  using Mat3 = Eigen::Matrix3<Scalar>;

  Scalar mu = Scalar(0.01);
  std::function<Vec3(const Vec3&)> vector_potential;         // A(X)
  std::function<Vec3(const Vec3&)> magnetic_field;           // B = curl A, closed form
  std::function<Scalar(const Vec3&)> field_strength;         // |B|
  std::function<Vec3(const Vec3&)> field_strength_gradient;  // grad |B|
  std::function<Vec3(const Vec3&)> unit_field;               // b = B/|B|
  std::function<Mat3(const Vec3&)> unit_field_jacobian;      // db_i/dx_j; empty means zero
  std::function<Scalar(const Vec3&)> phi;
  std::function<Vec3(const Vec3&)> grad_phi;

  PoissonSystem<Scalar> poisson;
  ProbeRegion<Scalar> probes;
  Scalar degeneracy_rel_threshold = Scalar(1e-10);

  struct Entries {
    Scalar a12, a13, a23;
    Vec3 b;
    Scalar denom;  // D = a12 b3 - a13 b2 + a23 b1
  };

  Entries entries(const Vector<Scalar>& z) const {
    require_length(z, 4, "GyrocenterSystem");
    const Vec3 x = z.template segment<3>(0);
    const Scalar u = z[3];
    const Vec3 bfield = magnetic_field(x);
    Entries e;
    e.b = unit_field(x);
    Scalar c12 = 0, c13 = 0, c23 = 0;
    if (unit_field_jacobian) {
      Mat3 jb = unit_field_jacobian(x);
      c12 = jb(1, 0) - jb(0, 1);
      c13 = jb(2, 0) - jb(0, 2);
      c23 = jb(2, 1) - jb(1, 2);
    }
    e.a12 = bfield[2] + u * c12;
    e.a13 = -bfield[1] + u * c13;
    e.a23 = bfield[0] + u * c23;
    e.denom = e.a12 * e.b[2] - e.a13 * e.b[1] + e.a23 * e.b[0];
    return e;
  }
};

// The printed inverse structure matrix; throws DegenerateStructure where
// det K = D^2 is numerically zero.
template <typename Scalar>
Matrix<Scalar> gyro_structure(const GyrocenterSystem<Scalar>& sys, const Vector<Scalar>& z) {
  auto e = sys.entries(z);
  const Scalar scale = std::abs(e.a12 * e.b[2]) + std::abs(e.a13 * e.b[1]) +
                       std::abs(e.a23 * e.b[0]);
  if (std::abs(e.denom) <= sys.degeneracy_rel_threshold * (Scalar(1) + scale))
    throw DegenerateStructure("gyro_structure: |a12 b3 - a13 b2 + a23 b1| below threshold");
  Matrix<Scalar> r(4, 4);
  const Scalar d = Scalar(1) / e.denom;
  r << 0, -e.b[2], e.b[1], e.a23,
      e.b[2], 0, -e.b[0], -e.a13,
      -e.b[1], e.b[0], 0, e.a12,
      -e.a23, e.a13, -e.a12, 0;
  r *= d;
  return r;
}

// The forward matrix K(Z) of K(Z) dZ/dt = grad H; kept for the R K = I checks.
template <typename Scalar>
Matrix<Scalar> gyro_k_matrix(const GyrocenterSystem<Scalar>& sys, const Vector<Scalar>& z) {
  auto e = sys.entries(z);
  Matrix<Scalar> k(4, 4);
  k << 0, e.a12, e.a13, -e.b[0],
      -e.a12, 0, e.a23, -e.b[1],
      -e.a13, -e.a23, 0, -e.b[2],
      e.b[0], e.b[1], e.b[2], 0;
  return k;
}

namespace detail {

// Unique root of c3 y^3 + c1 y = rhs with c3 > 0, c1 > 0 (strictly increasing),
// by Newton from y_init with a bisection safeguard on an expanding bracket.
// Newton is run to the machine floor (always within the requested tol); the
// last correction is applied even when it is below one ulp of y so that
// derivative probes at tiny t see the root, not the stopping band.
template <typename Scalar>
Scalar solve_monotone_cubic(Scalar c3, Scalar c1, Scalar rhs, Scalar y_init, Scalar tol) {
  if (!(c3 > 0) || !(c1 > 0))
    throw NonMonotone("cubic subflow: coefficient signs do not give a monotone cubic");
  (void)tol;
  auto g = [&](Scalar y) { return (c3 * y * y + c1) * y - rhs; };
  Scalar lo = y_init, hi = y_init;
  Scalar width = Scalar(1) + std::abs(y_init);
  for (int i = 0; i < 200 && g(lo) > 0; ++i) {
    lo -= width;
    width *= 2;
  }
  width = Scalar(1) + std::abs(y_init);
  for (int i = 0; i < 200 && g(hi) < 0; ++i) {
    hi += width;
    width *= 2;
  }
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar y = y_init;
  Scalar prev_step = std::numeric_limits<Scalar>::infinity();
  for (int iter = 0; iter < 120; ++iter) {
    const Scalar gy = g(y);
    if (gy == Scalar(0)) return y;
    if (gy > 0)
      hi = y;
    else
      lo = y;
    const Scalar gp = 3 * c3 * y * y + c1;
    Scalar step = gy / gp;
    Scalar y_new = y - step;
    if (!(y_new >= lo) || !(y_new <= hi)) {
      y_new = Scalar(0.5) * (lo + hi);
      step = y_new - y;
    }
    if (std::abs(step) <= 2 * eps * (Scalar(1) + std::abs(y))) return y_new;
    if (std::abs(step) >= prev_step && std::abs(step) <= std::sqrt(eps) * (Scalar(1) + std::abs(y)))
      return y_new;  // stalled in the rounding band
    prev_step = std::abs(step);
    y = y_new;
  }
  return y;  // bracketed iteration cannot diverge; y is inside [lo, hi]
}

}  // namespace detail

template <typename Scalar>
struct GyrocenterModel {
  GyrocenterSystem<Scalar> system;
  SplitSystem<Scalar> split;
};

// --- Example 1 -------------------------------------------------------------
// A = (z^3/(3 sqrt 2), -z^3/(3 sqrt 2), 0), B = (z^2/sqrt 2, z^2/sqrt 2, 0),
// |B| = z^2, b = (sqrt2/2, sqrt2/2, 0) constant, phi = x^2 + y^2.
// Split: H1 = x^2 + y^2 and H2 = mu z^2 + u^2/2.

// Exact flow of H1 = x^2 + y^2: x, y fixed,
//   z(t) = cbrt(3 sqrt2 (y0 - x0) t + z0^3), u(t) = u0 - sqrt2 (x0 + y0) t.
template <typename Scalar>
Vector<Scalar> gyro_ex1_subflow_H1(const Vector<Scalar>& z, Scalar t) {
  require_length(z, 4, "gyro_ex1_subflow_H1");
  if (t == Scalar(0)) return z;
  const Scalar r2 = std::sqrt(Scalar(2));
  Vector<Scalar> out = z;
  out[2] = std::cbrt(3 * r2 * (z[1] - z[0]) * t + z[2] * z[2] * z[2]);
  out[3] = z[3] - r2 * (z[0] + z[1]) * t;
  if (out[2] == Scalar(0))
    throw DegenerateStructure("gyro_ex1_subflow_H1: flow reaches c(z) = 0");
  return out;
}

// Exact flow of H2 = mu z^2 + u^2/2: z, u fixed; x, y advance linearly with
// the coefficient matrix frozen at (z0, u0).
template <typename Scalar>
Vector<Scalar> gyro_ex1_subflow_H2(const Vector<Scalar>& z, Scalar t, Scalar mu) {
  require_length(z, 4, "gyro_ex1_subflow_H2");
  if (t == Scalar(0)) return z;
  if (z[2] == Scalar(0)) throw DegenerateStructure("gyro_ex1_subflow_H2: c(z) = 0");
  const Scalar r2h = std::sqrt(Scalar(2)) / 2;  // b1 = b2
  const Scalar dz_h = 2 * mu * z[2];            // dH2/dz
  const Scalar du_h = z[3];                     // dH2/du
  const Scalar c = z[2] * z[2];
  Vector<Scalar> out = z;
  out[0] = z[0] + t * (r2h / c * dz_h + r2h * du_h);
  out[1] = z[1] + t * (-r2h / c * dz_h + r2h * du_h);
  return out;
}

template <typename Scalar = double>
GyrocenterModel<Scalar> gyro_example1(Scalar mu = Scalar(0.01)) {
  if (!(mu > 0)) throw std::invalid_argument("gyro_example1: mu must be > 0");
  using Vec3 = Eigen::Vector3<Scalar>;
  GyrocenterModel<Scalar> model;
  auto& gs = model.system;
  const Scalar r2 = std::sqrt(Scalar(2));
  gs.mu = mu;
  gs.vector_potential = [r2](const Vec3& x) {
    return Vec3(x[2] * x[2] * x[2] / (3 * r2), -x[2] * x[2] * x[2] / (3 * r2), 0);
  };
  gs.magnetic_field = [r2](const Vec3& x) {
    return Vec3(x[2] * x[2] / r2, x[2] * x[2] / r2, 0);
  };
  gs.field_strength = [](const Vec3& x) { return x[2] * x[2]; };
  gs.field_strength_gradient = [](const Vec3& x) { return Vec3(0, 0, 2 * x[2]); };
  gs.unit_field = [r2](const Vec3&) { return Vec3(r2 / 2, r2 / 2, 0); };
  gs.phi = [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1]; };
  gs.grad_phi = [](const Vec3& x) { return Vec3(2 * x[0], 2 * x[1], 0); };

  DependencyPattern pat(4);
  pat.set_entry(0, 2, {2});  // b2 / c(z)
  pat.set_entry(1, 2, {2});  // -b1 / c(z)
  // (0,3) and (1,3) constant.

  gs.poisson.dim = 4;
  gs.poisson.name = "gy-ex1";
  gs.poisson.structure.dim = 4;
  gs.poisson.structure.pattern = pat;
  GyrocenterSystem<Scalar> gs_for_r = gs;  // self-contained copy for the closure
  gs.poisson.structure.evaluate = [gs_for_r](const Vector<Scalar>& z) {
    return gyro_structure(gs_for_r, z);
  };
  gs.poisson.hamiltonian.value = [mu](const Vector<Scalar>& z) {
    return z[3] * z[3] / 2 + mu * z[2] * z[2] + z[0] * z[0] + z[1] * z[1];
  };
  gs.poisson.hamiltonian.gradient = [mu](const Vector<Scalar>& z) {
    Vector<Scalar> g(4);
    g << 2 * z[0], 2 * z[1], 2 * mu * z[2], z[3];
    return g;
  };
  gs.probes.lo = Vector<Scalar>(4);
  gs.probes.lo << 10, 10, 20, 20;
  gs.probes.hi = Vector<Scalar>(4);
  gs.probes.hi << 60, 60, 80, 80;

  model.split.system = gs.poisson;
  model.split.subflows.push_back(
      {[](Scalar t, const Vector<Scalar>& z) { return gyro_ex1_subflow_H1(z, t); },
       ScalarField<Scalar>{[](const Vector<Scalar>& z) { return z[0] * z[0] + z[1] * z[1]; },
                           [](const Vector<Scalar>& z) {
                             Vector<Scalar> g(4);
                             g << 2 * z[0], 2 * z[1], 0, 0;
                             return g;
                           }},
       "H1=x^2+y^2"});
  model.split.subflows.push_back(
      {[mu](Scalar t, const Vector<Scalar>& z) { return gyro_ex1_subflow_H2(z, t, mu); },
       ScalarField<Scalar>{[mu](const Vector<Scalar>& z) {
                             return mu * z[2] * z[2] + z[3] * z[3] / 2;
                           },
                           [mu](const Vector<Scalar>& z) {
                             Vector<Scalar> g(4);
                             g << 0, 0, 2 * mu * z[2], z[3];
                             return g;
                           }},
       "H2=mu*z^2+u^2/2"});
  return model;
}

// --- Example 2 -------------------------------------------------------------
// A = (-b y^3/3, a x^3/3, 0), B = (0, 0, a x^2 + b y^2), b = (0, 0, 1),
// phi = 2 z^2.  Split: H1 = mu a x^2, H2 = mu b y^2, H3 = 2 z^2, H4 = u^2/2.
// The a, b constants default to 1 and are exposed as parameters.

// Exact flow of H1 = mu a x^2: x, z, u fixed; y satisfies the monotone cubic
//   a x0^2 y + (b/3) y^3 = a x0^2 y0 + (b/3) y0^3 + 2 a mu x0 t.
template <typename Scalar>
Vector<Scalar> gyro_ex2_subflow_H1(const Vector<Scalar>& z, Scalar t, Scalar mu, Scalar a,
                                   Scalar b, Scalar tol = Scalar(1e-13)) {
  require_length(z, 4, "gyro_ex2_subflow_H1");
  if (t == Scalar(0)) return z;
  if (z[0] == Scalar(0))
    throw DegenerateSubflow("gyro_ex2_subflow_H1: x0 = 0 leaves the cubic undefined");
  const Scalar c1 = a * z[0] * z[0];
  const Scalar c3 = b / 3;
  const Scalar rhs = c1 * z[1] + c3 * z[1] * z[1] * z[1] + 2 * a * mu * z[0] * t;
  Vector<Scalar> out = z;
  out[1] = detail::solve_monotone_cubic(c3, c1, rhs, z[1], tol);
  return out;
}

// Exact flow of H2 = mu b y^2: the mirrored cubic in x.
template <typename Scalar>
Vector<Scalar> gyro_ex2_subflow_H2(const Vector<Scalar>& z, Scalar t, Scalar mu, Scalar a,
                                   Scalar b, Scalar tol = Scalar(1e-13)) {
  require_length(z, 4, "gyro_ex2_subflow_H2");
  if (t == Scalar(0)) return z;
  if (z[1] == Scalar(0))
    throw DegenerateSubflow("gyro_ex2_subflow_H2: y0 = 0 leaves the cubic undefined");
  const Scalar c1 = b * z[1] * z[1];
  const Scalar c3 = a / 3;
  const Scalar rhs = c1 * z[0] + c3 * z[0] * z[0] * z[0] - 2 * b * mu * z[1] * t;
  Vector<Scalar> out = z;
  out[0] = detail::solve_monotone_cubic(c3, c1, rhs, z[0], tol);
  return out;
}

// Exact flow of H3 = 2 z^2: u advances linearly, everything else fixed.
template <typename Scalar>
Vector<Scalar> gyro_ex2_subflow_H3(const Vector<Scalar>& z, Scalar t) {
  if (t == Scalar(0)) return z;
  Vector<Scalar> out = z;
  out[3] = z[3] - 4 * z[2] * t;
  return out;
}

// Exact flow of H4 = u^2/2: z advances linearly, everything else fixed.
template <typename Scalar>
Vector<Scalar> gyro_ex2_subflow_H4(const Vector<Scalar>& z, Scalar t) {
  if (t == Scalar(0)) return z;
  Vector<Scalar> out = z;
  out[2] = z[2] + z[3] * t;
  return out;
}

template <typename Scalar = double>
GyrocenterModel<Scalar> gyro_example2(Scalar mu = Scalar(0.001), Scalar a = 1, Scalar b = 1) {
  if (!(mu > 0)) throw std::invalid_argument("gyro_example2: mu must be > 0");
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("gyro_example2: a, b must be > 0");
  using Vec3 = Eigen::Vector3<Scalar>;
  GyrocenterModel<Scalar> model;
  auto& gs = model.system;
  gs.mu = mu;
  gs.vector_potential = [a, b](const Vec3& x) {
    return Vec3(-b * x[1] * x[1] * x[1] / 3, a * x[0] * x[0] * x[0] / 3, 0);
  };
  gs.magnetic_field = [a, b](const Vec3& x) {
    return Vec3(0, 0, a * x[0] * x[0] + b * x[1] * x[1]);
  };
  gs.field_strength = [a, b](const Vec3& x) { return a * x[0] * x[0] + b * x[1] * x[1]; };
  gs.field_strength_gradient = [a, b](const Vec3& x) {
    return Vec3(2 * a * x[0], 2 * b * x[1], 0);
  };
  gs.unit_field = [](const Vec3&) { return Vec3(0, 0, 1); };
  gs.phi = [](const Vec3& x) { return 2 * x[2] * x[2]; };
  gs.grad_phi = [](const Vec3& x) { return Vec3(0, 0, 4 * x[2]); };

  DependencyPattern pat(4);
  pat.set_entry(0, 1, {0, 1});  // -1 / (a x^2 + b y^2)
  // (2,3) constant.

  gs.poisson.dim = 4;
  gs.poisson.name = "gy-ex2";
  gs.poisson.structure.dim = 4;
  gs.poisson.structure.pattern = pat;
  GyrocenterSystem<Scalar> gs_for_r = gs;
  gs.poisson.structure.evaluate = [gs_for_r](const Vector<Scalar>& z) {
    return gyro_structure(gs_for_r, z);
  };
  gs.poisson.hamiltonian.value = [mu, a, b](const Vector<Scalar>& z) {
    return z[3] * z[3] / 2 + mu * (a * z[0] * z[0] + b * z[1] * z[1]) + 2 * z[2] * z[2];
  };
  gs.poisson.hamiltonian.gradient = [mu, a, b](const Vector<Scalar>& z) {
    Vector<Scalar> g(4);
    g << 2 * mu * a * z[0], 2 * mu * b * z[1], 4 * z[2], z[3];
    return g;
  };
  gs.probes.lo = Vector<Scalar>(4);
  gs.probes.lo << 10, 10, 10, 10;
  gs.probes.hi = Vector<Scalar>(4);
  gs.probes.hi << 40, 40, 50, 60;

  model.split.system = gs.poisson;
  model.split.subflows.push_back(
      {[mu, a, b](Scalar t, const Vector<Scalar>& z) {
         return gyro_ex2_subflow_H1(z, t, mu, a, b);
       },
       ScalarField<Scalar>{[mu, a](const Vector<Scalar>& z) { return mu * a * z[0] * z[0]; },
                           [mu, a](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(4);
                             g[0] = 2 * mu * a * z[0];
                             return g;
                           }},
       "H1=mu*a*x^2"});
  model.split.subflows.push_back(
      {[mu, a, b](Scalar t, const Vector<Scalar>& z) {
         return gyro_ex2_subflow_H2(z, t, mu, a, b);
       },
       ScalarField<Scalar>{[mu, b](const Vector<Scalar>& z) { return mu * b * z[1] * z[1]; },
                           [mu, b](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(4);
                             g[1] = 2 * mu * b * z[1];
                             return g;
                           }},
       "H2=mu*b*y^2"});
  model.split.subflows.push_back(
      {[](Scalar t, const Vector<Scalar>& z) { return gyro_ex2_subflow_H3(z, t); },
       ScalarField<Scalar>{[](const Vector<Scalar>& z) { return 2 * z[2] * z[2]; },
                           [](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(4);
                             g[2] = 4 * z[2];
                             return g;
                           }},
       "H3=2*z^2"});
  model.split.subflows.push_back(
      {[](Scalar t, const Vector<Scalar>& z) { return gyro_ex2_subflow_H4(z, t); },
       ScalarField<Scalar>{[](const Vector<Scalar>& z) { return z[3] * z[3] / 2; },
                           [](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(4);
                             g[3] = z[3];
                             return g;
                           }},
       "H4=u^2/2"});
  return model;
}

}  // namespace psi

#endif
