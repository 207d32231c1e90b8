#ifndef PSI_CHARGED_PARTICLE_HPP
#define PSI_CHARGED_PARTICLE_HPP

#include <cmath>
#include <functional>
#include <string>

#include "psi/probe.hpp"
#include "psi/splitting.hpp"

namespace psi {

// Electromagnetic field with scalar potential; E = -grad(phi) away from the
// singular set.
template <typename Scalar>
struct EMField {
  std::function<Eigen::Vector3<Scalar>(const Eigen::Vector3<Scalar>&)> B;
  std::function<Eigen::Vector3<Scalar>(const Eigen::Vector3<Scalar>&)> E;
  std::function<Scalar(const Eigen::Vector3<Scalar>&)> phi;
  std::function<Eigen::Vector3<Scalar>(const Eigen::Vector3<Scalar>&)> grad_phi;
  std::string singular_set;
  // Admissibility of a position (outside the singular set); used by the
  // subflows to refuse paths through the excluded points.
  std::function<bool(const Eigen::Vector3<Scalar>&)> admissible;
};

// 6-D charged particle in a static electromagnetic field, state Z = (X, V):
//   R(Z) = [[0, I/m], [-I/m, -q Bhat(X)/m^2]],
//   H    = m |V|^2 / 2 + q phi(X).
// The closed-form kinetic subflows (velocity line integrals of B along the
// straight path) are field-specific and installed by the example builders.
template <typename Scalar>
struct ChargedParticleSystem {
  Scalar mass = 1;
  Scalar charge = 1;
  EMField<Scalar> field;
  PoissonSystem<Scalar> poisson;
  ProbeRegion<Scalar> probes;
  // Velocity increment of the axis-i kinetic flow after time t from (X0, vi0);
  // exactly two components are nonzero.
  std::function<Eigen::Vector3<Scalar>(int axis, const Eigen::Vector3<Scalar>& x0, Scalar vi0,
                                       Scalar t)>
      kinetic_velocity_update;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> charged_particle_structure(const Eigen::Vector3<Scalar>& b, Scalar m, Scalar q) {
  Matrix<Scalar> r = Matrix<Scalar>::Zero(6, 6);
  const Scalar im = Scalar(1) / m;
  for (int i = 0; i < 3; ++i) {
    r(i, 3 + i) = im;
    r(3 + i, i) = -im;
  }
  // -q Bhat / m^2 with Bhat the hat map of B.
  const Scalar f = -q / (m * m);
  r(3, 4) = f * (-b[2]);
  r(4, 3) = -r(3, 4);
  r(3, 5) = f * b[1];
  r(5, 3) = -r(3, 5);
  r(4, 5) = f * (-b[0]);
  r(5, 4) = -r(4, 5);
  return r;
}

}  // namespace detail

// Exact flow of the kinetic piece H_i = m v_i^2 / 2: x_i advances on a straight
// line, v_i is constant, and the other two velocities pick up closed-form line
// integrals of B along that path.
template <typename Scalar>
Vector<Scalar> kinetic_subflow(const ChargedParticleSystem<Scalar>& sys, int axis,
                               const Vector<Scalar>& z, Scalar t) {
  require_length(z, 6, "kinetic_subflow");
  require_finite(z, "kinetic_subflow");
  if (t == Scalar(0)) return z;
  Eigen::Vector3<Scalar> x0 = z.template segment<3>(0);
  const Scalar vi0 = z[3 + axis];
  Vector<Scalar> out = z;
  out[axis] = z[axis] + vi0 * t;
  Eigen::Vector3<Scalar> dv = sys.kinetic_velocity_update(axis, x0, vi0, t);
  out[3] += dv[0];
  out[4] += dv[1];
  out[5] += dv[2];
  require_finite(out, "kinetic_subflow");
  return out;
}

// Exact flow of the potential piece H = q phi(X): X is fixed, so the field
// value freezes and V advances linearly, V(t) = V0 + (q/m) E(X0) t.
template <typename Scalar>
Vector<Scalar> potential_subflow(const ChargedParticleSystem<Scalar>& sys, const Vector<Scalar>& z,
                                 Scalar t) {
  require_length(z, 6, "potential_subflow");
  require_finite(z, "potential_subflow");
  if (t == Scalar(0)) return z;
  Eigen::Vector3<Scalar> x0 = z.template segment<3>(0);
  if (sys.field.admissible && !sys.field.admissible(x0))
    throw DomainExit("potential_subflow: position in singular set (" + sys.field.singular_set +
                     ")");
  Eigen::Vector3<Scalar> e = sys.field.E(x0);
  if (!e.allFinite()) throw DomainExit("potential_subflow: field not finite at X0");
  Vector<Scalar> out = z;
  out.template segment<3>(3) += (sys.charge / sys.mass) * t * e;
  return out;
}

// Partial potential flow used by the fully separable split: only the j-th
// velocity component advances, driven by the j-th field component.
template <typename Scalar>
Vector<Scalar> potential_subflow_component(const ChargedParticleSystem<Scalar>& sys, int comp,
                                           const Vector<Scalar>& z, Scalar t) {
  require_length(z, 6, "potential_subflow_component");
  if (t == Scalar(0)) return z;
  Eigen::Vector3<Scalar> x0 = z.template segment<3>(0);
  if (sys.field.admissible && !sys.field.admissible(x0))
    throw DomainExit("potential_subflow: position in singular set (" + sys.field.singular_set +
                     ")");
  Eigen::Vector3<Scalar> e = sys.field.E(x0);
  if (!std::isfinite(e[comp])) throw DomainExit("potential_subflow: field not finite at X0");
  Vector<Scalar> out = z;
  out[3 + comp] += (sys.charge / sys.mass) * t * e[comp];
  return out;
}

namespace detail {

template <typename Scalar>
ScalarField<Scalar> kinetic_piece(Scalar m, int axis) {
  return {[m, axis](const Vector<Scalar>& z) { return m * z[3 + axis] * z[3 + axis] / 2; },
          [m, axis](const Vector<Scalar>& z) {
            Vector<Scalar> g = Vector<Scalar>::Zero(6);
            g[3 + axis] = m * z[3 + axis];
            return g;
          }};
}

template <typename Scalar>
PoissonSystem<Scalar> assemble_charged_particle(const EMField<Scalar>& field, Scalar m, Scalar q,
                                                DependencyPattern pattern, std::string name) {
  PoissonSystem<Scalar> sys;
  sys.dim = 6;
  sys.name = std::move(name);
  sys.structure.dim = 6;
  sys.structure.pattern = std::move(pattern);
  sys.structure.evaluate = [field, m, q](const Vector<Scalar>& z) {
    return charged_particle_structure<Scalar>(field.B(z.template segment<3>(0)), m, q);
  };
  sys.hamiltonian.value = [field, m, q](const Vector<Scalar>& z) {
    return m * z.template segment<3>(3).squaredNorm() / 2 + q * field.phi(z.template segment<3>(0));
  };
  sys.hamiltonian.gradient = [field, m, q](const Vector<Scalar>& z) {
    Vector<Scalar> g(6);
    g.template segment<3>(0) = q * field.grad_phi(z.template segment<3>(0));
    g.template segment<3>(3) = m * z.template segment<3>(3);
    return g;
  };
  return sys;
}

}  // namespace detail

template <typename Scalar>
struct ChargedParticleModel {
  ChargedParticleSystem<Scalar> system;
  SplitSystem<Scalar> split;        // kinetic x3 then potential
  SplitSystem<Scalar> split_fine;   // fully separable variant (empty unless provided)
};

// Field configuration with B = (0, 0, x1^2 + x2^2) and radial E of magnitude
// 1e-3 / r^2, phi = 1e-3 / r; singular on the x3-axis (r = 0).
template <typename Scalar = double>
ChargedParticleModel<Scalar> charged_particle_example1(Scalar m = 1, Scalar q = 1) {
  EMField<Scalar> f;
  f.singular_set = "x1 = x2 = 0";
  f.B = [](const Eigen::Vector3<Scalar>& x) {
    return Eigen::Vector3<Scalar>(0, 0, x[0] * x[0] + x[1] * x[1]);
  };
  f.phi = [](const Eigen::Vector3<Scalar>& x) {
    return Scalar(1e-3) / std::sqrt(x[0] * x[0] + x[1] * x[1]);
  };
  f.E = [](const Eigen::Vector3<Scalar>& x) {
    const Scalar r2 = x[0] * x[0] + x[1] * x[1];
    const Scalar c = Scalar(1e-3) / (r2 * std::sqrt(r2));
    return Eigen::Vector3<Scalar>(c * x[0], c * x[1], 0);
  };
  f.grad_phi = [f](const Eigen::Vector3<Scalar>& x) { return (-f.E(x)).eval(); };
  f.admissible = [](const Eigen::Vector3<Scalar>& x) {
    return x[0] * x[0] + x[1] * x[1] > 0;
  };

  DependencyPattern pat(6);
  // A block constant; C block entries depend on positions through B3(x1, x2).
  pat.set_entry(3, 4, {0, 1});

  ChargedParticleModel<Scalar> model;
  model.system.mass = m;
  model.system.charge = q;
  model.system.field = f;
  model.system.poisson = detail::assemble_charged_particle(f, m, q, pat, "cp-ex1");
  model.system.kinetic_velocity_update = [m, q](int axis, const Eigen::Vector3<Scalar>& x0,
                                                Scalar vi0, Scalar t) {
    Eigen::Vector3<Scalar> dv = Eigen::Vector3<Scalar>::Zero();
    const Scalar qm = q / m;
    if (axis == 0) {
      // dv2/dt = -(q/m) v1 B3 along x1(s) = x10 + v10 s.
      const Scalar i3 = x0[0] * x0[0] * t + x0[0] * vi0 * t * t + vi0 * vi0 * t * t * t / 3 +
                        x0[1] * x0[1] * t;
      dv[1] = -qm * vi0 * i3;
    } else if (axis == 1) {
      // dv1/dt = +(q/m) v2 B3 along x2(s) = x20 + v20 s.
      const Scalar i3 = x0[1] * x0[1] * t + x0[1] * vi0 * t * t + vi0 * vi0 * t * t * t / 3 +
                        x0[0] * x0[0] * t;
      dv[0] = qm * vi0 * i3;
    }
    // axis 2: B1 = B2 = 0, no velocity change.
    return dv;
  };
  model.system.probes.lo = Vector<Scalar>(6);
  model.system.probes.lo << -2, -2, -2, -0.5, -0.5, -0.5;
  model.system.probes.hi = Vector<Scalar>(6);
  model.system.probes.hi << 2, 2, 2, 0.5, 0.5, 0.5;
  model.system.probes.admissible = [](const Vector<Scalar>& z) {
    return z[0] * z[0] + z[1] * z[1] > Scalar(0.09);
  };

  auto sys = model.system;
  SplitSystem<Scalar> split;
  split.system = sys.poisson;
  for (int i = 0; i < 3; ++i)
    split.subflows.push_back(
        {[sys, i](Scalar t, const Vector<Scalar>& z) { return kinetic_subflow(sys, i, z, t); },
         detail::kinetic_piece<Scalar>(m, i), "H" + std::to_string(i + 1) + "=m*v" +
                                                  std::to_string(i + 1) + "^2/2"});
  split.subflows.push_back(
      {[sys](Scalar t, const Vector<Scalar>& z) { return potential_subflow(sys, z, t); },
       ScalarField<Scalar>{[f, q](const Vector<Scalar>& z) {
                             return q * f.phi(z.template segment<3>(0));
                           },
                           [f, q](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(6);
                             g.template segment<3>(0) =
                                 q * f.grad_phi(z.template segment<3>(0));
                             return g;
                           }},
       "H4=q*phi"});
  model.split = std::move(split);
  return model;
}

// Field configuration with B = (-x3/sqrt(x2^2+x3^2), -x1/sqrt(x1^2+x3^2),
// -x2/sqrt(x1^2+x2^2)) and phi = 1e-4 (ln x1 + ln x2 + 2 ln x3); defined in
// the open positive octant.  Ships both the 4-piece and the fully separable
// 6-piece split.
template <typename Scalar = double>
ChargedParticleModel<Scalar> charged_particle_example2(Scalar m = 1, Scalar q = 1) {
  EMField<Scalar> f;
  f.singular_set = "any coordinate plane x_j = 0";
  f.B = [](const Eigen::Vector3<Scalar>& x) {
    return Eigen::Vector3<Scalar>(-x[2] / std::sqrt(x[1] * x[1] + x[2] * x[2]),
                                  -x[0] / std::sqrt(x[0] * x[0] + x[2] * x[2]),
                                  -x[1] / std::sqrt(x[0] * x[0] + x[1] * x[1]));
  };
  f.phi = [](const Eigen::Vector3<Scalar>& x) {
    return Scalar(1e-4) * (std::log(x[0]) + std::log(x[1]) + 2 * std::log(x[2]));
  };
  f.grad_phi = [](const Eigen::Vector3<Scalar>& x) {
    return Eigen::Vector3<Scalar>(Scalar(1e-4) / x[0], Scalar(1e-4) / x[1], Scalar(2e-4) / x[2]);
  };
  f.E = [f](const Eigen::Vector3<Scalar>& x) { return (-f.grad_phi(x)).eval(); };
  f.admissible = [](const Eigen::Vector3<Scalar>& x) {
    return x[0] > 0 && x[1] > 0 && x[2] > 0;
  };

  DependencyPattern pat(6);
  pat.set_entry(3, 4, {0, 1});  // B3(x1, x2)
  pat.set_entry(3, 5, {0, 2});  // B2(x1, x3)
  pat.set_entry(4, 5, {1, 2});  // B1(x2, x3)

  ChargedParticleModel<Scalar> model;
  model.system.mass = m;
  model.system.charge = q;
  model.system.field = f;
  model.system.poisson = detail::assemble_charged_particle(f, m, q, pat, "cp-ex2");
  model.system.kinetic_velocity_update = [m, q](int axis, const Eigen::Vector3<Scalar>& x0,
                                                Scalar vi0, Scalar t) {
    Eigen::Vector3<Scalar> dv = Eigen::Vector3<Scalar>::Zero();
    if (vi0 == Scalar(0)) return dv;
    const Scalar qm = q / m;
    const Scalar w0 = x0[axis];
    const Scalar w1 = x0[axis] + vi0 * t;
    // asinh-form antiderivative of 1/sqrt(w^2 + c^2); requires c != 0 unless
    // the path stays clear of w = 0.
    auto stretch = [&](Scalar c) -> Scalar {
      if (c == Scalar(0)) {
        if ((w0 <= 0 && w1 >= 0) || (w0 >= 0 && w1 <= 0))
          throw DomainExit("kinetic_subflow: straight path crosses the field singular set");
        return (std::log(std::abs(w1)) - std::log(std::abs(w0))) / (w0 > 0 ? Scalar(1) : Scalar(-1));
      }
      const Scalar ac = std::abs(c);
      return std::asinh(w1 / ac) - std::asinh(w0 / ac);
    };
    // Antiderivative of w / sqrt(w^2 + c^2).
    auto radial = [&](Scalar c) -> Scalar {
      return std::sqrt(w1 * w1 + c * c) - std::sqrt(w0 * w0 + c * c);
    };
    if (axis == 0) {
      dv[1] = qm * x0[1] * stretch(x0[1]);  // -v1 int B3, B3 = -x2/sqrt(x1^2+x2^2)
      dv[2] = -qm * radial(x0[2]);          // +v1 int B2, B2 = -x1/sqrt(x1^2+x3^2)
    } else if (axis == 1) {
      dv[0] = -qm * radial(x0[0]);          // +v2 int B3
      dv[2] = qm * x0[2] * stretch(x0[2]);  // -v2 int B1, B1 = -x3/sqrt(x2^2+x3^2)
    } else {
      dv[0] = qm * x0[0] * stretch(x0[0]);  // -v3 int B2
      dv[1] = -qm * radial(x0[1]);          // +v3 int B1
    }
    return dv;
  };
  model.system.probes.lo = Vector<Scalar>(6);
  model.system.probes.lo << 0.5, 0.5, 0.5, 0.3, 0.3, 0.3;
  model.system.probes.hi = Vector<Scalar>(6);
  model.system.probes.hi << 3, 3, 3, 2.5, 2.5, 2.5;
  model.system.probes.admissible = nullptr;

  auto sys = model.system;
  SplitSystem<Scalar> split;
  split.system = sys.poisson;
  for (int i = 0; i < 3; ++i)
    split.subflows.push_back(
        {[sys, i](Scalar t, const Vector<Scalar>& z) { return kinetic_subflow(sys, i, z, t); },
         detail::kinetic_piece<Scalar>(m, i), "H" + std::to_string(i + 1) + "=m*v" +
                                                  std::to_string(i + 1) + "^2/2"});
  split.subflows.push_back(
      {[sys](Scalar t, const Vector<Scalar>& z) { return potential_subflow(sys, z, t); },
       ScalarField<Scalar>{[f, q](const Vector<Scalar>& z) {
                             return q * f.phi(z.template segment<3>(0));
                           },
                           [f, q](const Vector<Scalar>& z) {
                             Vector<Scalar> g = Vector<Scalar>::Zero(6);
                             g.template segment<3>(0) =
                                 q * f.grad_phi(z.template segment<3>(0));
                             return g;
                           }},
       "H4=q*phi"});
  model.split = std::move(split);

  // Fully separable 6-piece split: per-axis kinetic pieces plus per-coordinate
  // potential pieces q * phi_j(x_j).
  SplitSystem<Scalar> fine;
  fine.system = sys.poisson;
  for (int i = 0; i < 3; ++i)
    fine.subflows.push_back(
        {[sys, i](Scalar t, const Vector<Scalar>& z) { return kinetic_subflow(sys, i, z, t); },
         detail::kinetic_piece<Scalar>(m, i), "K" + std::to_string(i + 1)});
  const Scalar coeff[3] = {Scalar(1e-4), Scalar(1e-4), Scalar(2e-4)};
  for (int j = 0; j < 3; ++j) {
    ScalarField<Scalar> piece{
        [j, q, c = coeff[j]](const Vector<Scalar>& z) { return q * c * std::log(z[j]); },
        [j, q, c = coeff[j]](const Vector<Scalar>& z) {
          Vector<Scalar> g = Vector<Scalar>::Zero(6);
          g[j] = q * c / z[j];
          return g;
        }};
    fine.subflows.push_back(
        {[sys, j](Scalar t, const Vector<Scalar>& z) {
           return potential_subflow_component(sys, j, z, t);
         },
         piece, "U" + std::to_string(j + 1)});
  }
  model.split_fine = std::move(fine);
  return model;
}

}  // namespace psi

#endif
