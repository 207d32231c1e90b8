#ifndef PSI_CLI_EXPERIMENTS_HPP
#define PSI_CLI_EXPERIMENTS_HPP

#include <future>
#include <string>
#include <vector>

#include "psi/diagnostics.hpp"
#include "psi/model_registry.hpp"

namespace psi_cli {

struct RungResult {
  double h = 0;
  double ge_x = 0;
  double ge_vu = 0;
};

struct MethodConvergence {
  std::string method;
  std::vector<RungResult> rungs;
  double slope_x = 0;
  double slope_vu = 0;
};

struct ConvergenceExperiment {
  std::vector<MethodConvergence> methods;
  // Reference self-consistency defect (refinement vs doubled refinement) at
  // the coarsest rung, where the reference is least accurate.
  double reference_gate_defect = 0;
  double smallest_ge = 0;
};

// Global-error ladder against the high-refinement reference.  Rungs run in a
// small worker pool when threads > 1; results are ordered deterministically.
inline ConvergenceExperiment run_convergence(const psi::ModelInstance& inst,
                                             const std::vector<psi::Integrator<double>>& methods,
                                             const std::vector<double>& ladder, double t_final,
                                             long refinement = 20, int threads = 1) {
  struct RungData {
    double h;
    std::vector<std::pair<double, double>> ge;  // per method: (GE_X, GE_VU)
    double gate_defect = -1;
  };

  std::size_t coarsest = 0;
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i] > ladder[coarsest]) coarsest = i;

  auto run_rung = [&](std::size_t idx) {
    const double h = ladder[idx];
    const long n = std::lround(t_final / h);
    RungData data;
    data.h = h;
    auto ref = reference_trajectory(inst.system, inst.z0, h, n, refinement);
    if (idx == coarsest) {
      auto ref2 = reference_trajectory(inst.system, inst.z0, h, n, 2 * refinement);
      data.gate_defect = trajectory_distance(ref, ref2);
    }
    for (const auto& m : methods) {
      auto traj = integrate(m, inst.system.hamiltonian, inst.z0, h, n);
      auto ge = global_error(traj, ref, inst.error_groups);
      data.ge.emplace_back(ge[0], ge[1]);
    }
    return data;
  };

  std::vector<RungData> rungs(ladder.size());
  if (threads > 1) {
    std::vector<std::future<RungData>> futures;
    for (std::size_t i = 0; i < ladder.size(); ++i)
      futures.push_back(std::async(std::launch::async, run_rung, i));
    for (std::size_t i = 0; i < ladder.size(); ++i) rungs[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < ladder.size(); ++i) rungs[i] = run_rung(i);
  }

  ConvergenceExperiment out;
  out.reference_gate_defect = rungs[coarsest].gate_defect;
  out.smallest_ge = std::numeric_limits<double>::infinity();
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    MethodConvergence mc;
    mc.method = methods[mi].name;
    std::vector<std::pair<double, double>> px, pvu;
    for (const auto& rung : rungs) {
      mc.rungs.push_back({rung.h, rung.ge[mi].first, rung.ge[mi].second});
      px.emplace_back(rung.h, rung.ge[mi].first);
      pvu.emplace_back(rung.h, rung.ge[mi].second);
      out.smallest_ge = std::min({out.smallest_ge, rung.ge[mi].first, rung.ge[mi].second});
    }
    mc.slope_x = psi::estimate_order(px).slope;
    mc.slope_vu = psi::estimate_order(pvu).slope;
    out.methods.push_back(std::move(mc));
  }
  return out;
}

// The gate that invalidates error measurements instead of reporting numbers
// from an unconverged reference.
inline void enforce_reference_gate(const ConvergenceExperiment& exp) {
  const double tol = std::max(1e-10, 1e-3 * exp.smallest_ge);
  if (!(exp.reference_gate_defect <= tol))
    throw psi::ReferenceInconsistent(
        "reference trajectories at refinement r and 2r disagree by " +
        std::to_string(exp.reference_gate_defect));
}

struct MethodDrift {
  std::string method;
  std::vector<double> times;
  std::vector<double> series;  // |H(Z_n) - H(Z_0)| / |H(Z_0)|
  double max_err = 0;
  double tail_slope = 0;  // least-squares slope after discarding the transient
};

inline MethodDrift run_energy_drift_one(const psi::ModelInstance& inst,
                                        const psi::Integrator<double>& method, double h,
                                        double t_final, long stride,
                                        double transient_fraction = 0.1) {
  const long n = std::lround(t_final / h);
  auto traj = integrate(method, inst.system.hamiltonian, inst.z0, h, n, stride, false);
  MethodDrift out;
  out.method = method.name;
  out.times = traj.times;
  out.series = relative_energy_error_series(traj);
  for (double e : out.series) out.max_err = std::max(out.max_err, e);
  const std::size_t skip =
      static_cast<std::size_t>(transient_fraction * static_cast<double>(out.series.size()));
  std::vector<double> t_tail(out.times.begin() + skip, out.times.end());
  std::vector<double> s_tail(out.series.begin() + skip, out.series.end());
  out.tail_slope = psi::drift_slope(s_tail, t_tail);
  return out;
}

inline std::vector<MethodDrift> run_energy_drift(const psi::ModelInstance& inst,
                                                 const std::vector<psi::Integrator<double>>& methods,
                                                 double h, double t_final, long stride,
                                                 int threads = 1) {
  std::vector<MethodDrift> out(methods.size());
  if (threads > 1) {
    std::vector<std::future<MethodDrift>> futures;
    for (const auto& m : methods)
      futures.push_back(std::async(std::launch::async, [&inst, &m, h, t_final, stride] {
        return run_energy_drift_one(inst, m, h, t_final, stride);
      }));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < methods.size(); ++i)
      out[i] = run_energy_drift_one(inst, methods[i], h, t_final, stride);
  }
  return out;
}

}  // namespace psi_cli

#endif
