#ifndef PSI_SPLITTING_HPP
#define PSI_SPLITTING_HPP

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "psi/composition_tables.hpp"
#include "psi/poisson.hpp"
#include "psi/trajectory.hpp"

namespace psi {

// The exact flow map of one Hamiltonian piece H_i.
template <typename Scalar>
struct SubFlow {
  std::function<Vector<Scalar>(Scalar t, const Vector<Scalar>&)> flow;
  ScalarField<Scalar> piece;  // the H_i this flow advances
  std::string label;
};

template <typename Scalar>
struct SplitSystem {
  PoissonSystem<Scalar> system;
  std::vector<SubFlow<Scalar>> subflows;

  // Residual of sum_i H_i = H at a point; the split invariant.
  Scalar piece_sum_defect(const Vector<Scalar>& z) const {
    Scalar s = 0;
    for (const auto& sf : subflows) s += sf.piece(z);
    return std::abs(s - system.hamiltonian(z));
  }
};

// Ordered (alpha_i, beta_i) pairs of a palindromic composition of a
// first-order map and its adjoint.
template <typename Scalar>
struct CompositionScheme {
  std::vector<std::pair<Scalar, Scalar>> pairs;
  int declared_order = 0;
  std::string name;

  Scalar consistency_defect() const {
    Scalar s = 0;
    for (const auto& [a, b] : pairs) s += a + b;
    return std::abs(s - Scalar(1));
  }

  // Reversing the pair list and swapping alpha <-> beta must reproduce the
  // scheme: alpha_i = beta_{s+1-i}.
  Scalar palindrome_defect() const {
    Scalar worst = 0;
    const std::size_t s = pairs.size();
    for (std::size_t i = 0; i < s; ++i) {
      worst = std::max(worst, std::abs(pairs[i].first - pairs[s - 1 - i].second));
      worst = std::max(worst, std::abs(pairs[i].second - pairs[s - 1 - i].first));
    }
    return worst;
  }
};

template <typename Scalar>
CompositionScheme<Scalar> scheme_from_table(const CompositionTable& t) {
  CompositionScheme<Scalar> s;
  s.declared_order = t.order;
  s.name = t.name;
  for (const auto& p : t.pairs) s.pairs.emplace_back(Scalar(p.alpha), Scalar(p.beta));
  return s;
}

// The two order-4 schemes shipped with the library.
template <typename Scalar>
std::vector<CompositionScheme<Scalar>> builtin_schemes() {
  return {scheme_from_table<Scalar>(mclachlan_order4_s5()),
          scheme_from_table<Scalar>(blanes_moan_order4_s6())};
}

// Phi_h: subflows applied in list order, each for time h.
template <typename Scalar>
Vector<Scalar> first_order_map(const SplitSystem<Scalar>& split, Scalar h,
                               const Vector<Scalar>& z) {
  Vector<Scalar> y = z;
  for (const auto& sf : split.subflows) y = sf.flow(h, y);
  return y;
}

// Phi*_h = (Phi_{-h})^{-1}; for exact subflows this is the reversed-order
// composition with the same time step, so no nonlinear inversion is needed.
template <typename Scalar>
Vector<Scalar> adjoint_map(const SplitSystem<Scalar>& split, Scalar h, const Vector<Scalar>& z) {
  Vector<Scalar> y = z;
  for (auto it = split.subflows.rbegin(); it != split.subflows.rend(); ++it) y = it->flow(h, y);
  return y;
}

enum class StrangVariant {
  adjoint_outer,  // Phi*_{h/2} o Phi_{h/2}
  adjoint_inner,  // Phi_{h/2} o Phi*_{h/2}
};

template <typename Scalar>
Vector<Scalar> strang_step(const SplitSystem<Scalar>& split, Scalar h, const Vector<Scalar>& z,
                           StrangVariant variant = StrangVariant::adjoint_outer) {
  if (variant == StrangVariant::adjoint_outer)
    return adjoint_map(split, h / 2, first_order_map(split, h / 2, z));
  return first_order_map(split, h / 2, adjoint_map(split, h / 2, z));
}

// Applies Phi*_{beta_1 h}, Phi_{alpha_1 h}, ..., Phi*_{beta_s h}, Phi_{alpha_s h}.
template <typename Scalar>
Vector<Scalar> symmetric_composition_step(const CompositionScheme<Scalar>& scheme,
                                          const SplitSystem<Scalar>& split, Scalar h,
                                          const Vector<Scalar>& z) {
  Vector<Scalar> y = z;
  for (const auto& [alpha, beta] : scheme.pairs) {
    y = adjoint_map(split, beta * h, y);
    y = first_order_map(split, alpha * h, y);
  }
  return y;
}

// A stepper with a declared order; immutable once built.
template <typename Scalar>
struct Integrator {
  std::function<Vector<Scalar>(Scalar h, const Vector<Scalar>&)> step;
  int declared_order = 0;
  std::string name;
};

template <typename Scalar>
Integrator<Scalar> make_first_order_integrator(SplitSystem<Scalar> split) {
  return {[split = std::move(split)](Scalar h, const Vector<Scalar>& z) {
            return first_order_map(split, h, z);
          },
          1, "1stEPI"};
}

template <typename Scalar>
Integrator<Scalar> make_strang_integrator(SplitSystem<Scalar> split,
                                          StrangVariant variant = StrangVariant::adjoint_outer) {
  return {[split = std::move(split), variant](Scalar h, const Vector<Scalar>& z) {
            return strang_step(split, h, z, variant);
          },
          2, "2ndEPI"};
}

template <typename Scalar>
Integrator<Scalar> make_composition_integrator(CompositionScheme<Scalar> scheme,
                                               SplitSystem<Scalar> split, std::string name) {
  return {[scheme = std::move(scheme), split = std::move(split)](Scalar h,
                                                                 const Vector<Scalar>& z) {
            return symmetric_composition_step(scheme, split, h, z);
          },
          scheme.declared_order, std::move(name)};
}

// Fixed-step trajectory with per-step energies and wall-clock metadata.
// record_stride > 1 stores every stride-th step (plus the final one);
// store_states = false keeps only times and energies.
template <typename Scalar>
TrajectoryRecord<Scalar> integrate(const Integrator<Scalar>& integ, const ScalarField<Scalar>& h_field,
                                   const Vector<Scalar>& z0, Scalar h, long n_steps,
                                   long record_stride = 1, bool store_states = true) {
  if (!(h > 0)) throw std::invalid_argument("integrate: h must be > 0");
  if (n_steps < 0) throw std::invalid_argument("integrate: n_steps must be >= 0");
  if (record_stride < 1) record_stride = 1;

  TrajectoryRecord<Scalar> rec;
  rec.method_name = integ.name;
  rec.stepsize = h;
  rec.record_stride = record_stride;
  const long n_rec = n_steps / record_stride + 2;
  rec.times.reserve(n_rec);
  rec.energies.reserve(n_rec);
  if (store_states) rec.states.reserve(n_rec);

  auto record = [&](long k, const Vector<Scalar>& z) {
    rec.times.push_back(Scalar(k) * h);
    rec.energies.push_back(h_field(z));
    if (store_states) rec.states.push_back(z);
  };

  const auto t0 = std::chrono::steady_clock::now();
  Vector<Scalar> z = z0;
  record(0, z);
  for (long k = 1; k <= n_steps; ++k) {
    try {
      z = integ.step(h, z);
    } catch (const std::exception& e) {
      throw IntegrationError("integrate: step " + std::to_string(k) + ": " + e.what(), k);
    }
    if (k % record_stride == 0 || k == n_steps) record(k, z);
  }
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace psi

#endif
