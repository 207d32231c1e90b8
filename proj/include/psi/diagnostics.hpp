#ifndef PSI_DIAGNOSTICS_HPP
#define PSI_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "psi/lobatto.hpp"
#include "psi/splitting.hpp"
#include "psi/trajectory.hpp"

namespace psi {

// High-accuracy reference: 6th-order Lobatto at stepsize h/refinement with
// Newton tolerance 1e-13, subsampled onto the coarse grid.  No closed-form
// solution exists for the full systems, so reference validity is established
// by the refinement-doubling consistency gate below.
template <typename Scalar>
TrajectoryRecord<Scalar> reference_trajectory(const PoissonSystem<Scalar>& sys,
                                              const Vector<Scalar>& z0, Scalar h, long n_steps,
                                              long refinement = 20) {
  if (refinement < 1) throw std::invalid_argument("reference_trajectory: refinement >= 1");
  ImplicitSolveSettings<Scalar> st;
  st.tol = Scalar(1e-13);
  st.max_iter = 100;
  st.jacobian_mode = ImplicitSolveSettings<Scalar>::JacobianMode::frozen;
  auto integ = make_rk_integrator(lobatto_order6<Scalar>(), sys, st);
  integ.name = "6thloba-ref";
  auto rec = integrate(integ, sys.hamiltonian, z0, h / Scalar(refinement),
                       n_steps * refinement, refinement);
  rec.stepsize = h;
  rec.record_stride = 1;
  return rec;
}

// Max-norm distance between two trajectories' states; the self-consistency
// defect when the inputs are references at refinement r and 2r.
template <typename Scalar>
Scalar trajectory_distance(const TrajectoryRecord<Scalar>& a, const TrajectoryRecord<Scalar>& b) {
  if (a.states.size() != b.states.size())
    throw GridMismatch("trajectory_distance: different grid sizes");
  Scalar worst = 0;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    worst = std::max(worst, (a.states[i] - b.states[i]).template lpNorm<Eigen::Infinity>());
  return worst;
}

// Per-group global error: max over the grid of the Euclidean distance to the
// reference restricted to each index group.
template <typename Scalar>
std::vector<Scalar> global_error(const TrajectoryRecord<Scalar>& traj,
                                 const TrajectoryRecord<Scalar>& ref,
                                 const std::vector<std::vector<Index>>& groups) {
  if (traj.states.size() != ref.states.size() || traj.times.size() != ref.times.size())
    throw GridMismatch("global_error: trajectories on different grids");
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    if (std::abs(traj.times[i] - ref.times[i]) >
        Scalar(1e-12) * (Scalar(1) + std::abs(traj.times[i])))
      throw GridMismatch("global_error: time grids disagree");
  std::vector<Scalar> out(groups.size(), Scalar(0));
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    Vector<Scalar> d = traj.states[i] - ref.states[i];
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Scalar s = 0;
      for (Index idx : groups[g]) s += d[idx] * d[idx];
      out[g] = std::max(out[g], std::sqrt(s));
    }
  }
  return out;
}

// |H(Z_n) - H(Z_0)| / |H(Z_0)| per recorded step.
template <typename Scalar>
std::vector<Scalar> relative_energy_error_series(const TrajectoryRecord<Scalar>& traj) {
  if (traj.energies.empty()) throw std::invalid_argument("relative_energy_error_series: empty");
  const Scalar h0 = traj.energies.front();
  if (h0 == Scalar(0)) throw ZeroInitialEnergy("relative_energy_error_series: H(Z0) = 0");
  std::vector<Scalar> out(traj.energies.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(traj.energies[i] - h0) / std::abs(h0);
  return out;
}

template <typename Scalar>
struct ConvergenceReport {
  std::vector<Scalar> stepsizes;
  std::vector<Scalar> errors;
  Scalar slope = 0;
  Scalar intercept = 0;
  Scalar fit_residual = 0;  // RMS residual of the log-log fit
  int dropped_points = 0;   // errors at the rounding floor, excluded with notice
};

// Least-squares slope of log(GE) against log(h).  Points with GE at or below
// the rounding floor are dropped (reported in the result); fewer than three
// surviving points is a DegenerateFit.
template <typename Scalar>
ConvergenceReport<Scalar> estimate_order(const std::vector<std::pair<Scalar, Scalar>>& points,
                                         Scalar floor = Scalar(1e-14)) {
  ConvergenceReport<Scalar> rep;
  std::vector<Scalar> lx, ly;
  for (const auto& [h, ge] : points) {
    if (!(ge > floor)) {
      ++rep.dropped_points;
      continue;
    }
    rep.stepsizes.push_back(h);
    rep.errors.push_back(ge);
    lx.push_back(std::log(h));
    ly.push_back(std::log(ge));
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw DegenerateFit("estimate_order: fewer than 3 usable points (" +
                        std::to_string(rep.dropped_points) + " at rounding floor)");
  Scalar mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= Scalar(n);
  my /= Scalar(n);
  Scalar sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  Scalar rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar r = ly[i] - (rep.intercept + rep.slope * lx[i]);
    rss += r * r;
  }
  rep.fit_residual = std::sqrt(rss / Scalar(n));
  if (!std::isfinite(rep.slope)) throw DegenerateFit("estimate_order: non-finite slope");
  return rep;
}

// Least-squares linear slope of an error series against time; separates
// bounded oscillation (slope compatible with zero) from secular drift.
template <typename Scalar>
Scalar drift_slope(const std::vector<Scalar>& series, const std::vector<Scalar>& times) {
  if (series.size() != times.size())
    throw std::invalid_argument("drift_slope: length mismatch");
  if (series.size() < 100) throw std::invalid_argument("drift_slope: need at least 100 samples");
  const std::size_t n = series.size();
  Scalar mt = 0, ms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += times[i];
    ms += series[i];
  }
  mt /= Scalar(n);
  ms /= Scalar(n);
  Scalar stt = 0, sts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (times[i] - mt) * (times[i] - mt);
    sts += (times[i] - mt) * (series[i] - ms);
  }
  return sts / stt;
}

struct TimingEntry {
  std::string method;
  double median_seconds = 0;
};

// Wall-clock comparison: one warm-up run, then the median of `reps`
// repetitions per method, strictly serial.
template <typename Scalar>
std::vector<TimingEntry> timing_run(const std::vector<Integrator<Scalar>>& methods,
                                    const ScalarField<Scalar>& hamiltonian,
                                    const Vector<Scalar>& z0, Scalar h, Scalar t_final,
                                    int reps = 5) {
  const long n_steps = std::max<long>(1, std::lround(static_cast<double>(t_final / h)));
  std::vector<TimingEntry> out;
  for (const auto& m : methods) {
    integrate(m, hamiltonian, z0, h, n_steps, n_steps, false);  // warm-up
    std::vector<double> samples;
    for (int r = 0; r < reps; ++r) {
      auto rec = integrate(m, hamiltonian, z0, h, n_steps, n_steps, false);
      samples.push_back(rec.wall_clock_seconds);
    }
    std::sort(samples.begin(), samples.end());
    out.push_back({m.name, samples[samples.size() / 2]});
  }
  return out;
}

}  // namespace psi

#endif
