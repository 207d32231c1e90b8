#ifndef PSI_QUADRATURE_HPP
#define PSI_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "psi/errors.hpp"

namespace psi {

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK dqk15).  All nodes are
// interior, so integrands may be singular at the interval endpoints.
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kGk15WeightsK[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
inline constexpr double kGk15WeightsG[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Gk15Result {
  double integral;
  double error;
};

template <typename F>
Gk15Result gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double res_k = kGk15WeightsK[7] * f(c);
  double res_g = kGk15WeightsG[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    res_k += kGk15WeightsK[i] * fsum;
    if (i % 2 == 1) res_g += kGk15WeightsG[i / 2] * fsum;
  }
  res_k *= half;
  res_g *= half;
  return {res_k, std::abs(res_k - res_g)};
}

}  // namespace detail

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  int max_intervals = 4000;
};

// Globally adaptive Gauss-Kronrod integration of f over [a, b].
// Throws QuadratureFailure when the interval budget is exhausted before the
// requested accuracy is met.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (a == b) return 0.0;
  struct Interval {
    double a, b, integral, error;
  };
  std::vector<Interval> heap;
  auto r0 = detail::gk15(f, a, b);
  if (!std::isfinite(r0.integral)) throw NonFiniteValue("integrate_adaptive: integrand");
  heap.push_back({a, b, r0.integral, r0.error});
  double total = r0.integral, total_err = r0.error;
  int used = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (used >= opt.max_intervals)
      throw QuadratureFailure("integrate_adaptive: interval budget exhausted");
    std::size_t worst = 0;
    for (std::size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;
    Interval iv = heap[worst];
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid <= iv.a || mid >= iv.b)
      throw QuadratureFailure("integrate_adaptive: interval collapsed below rounding");
    auto rl = detail::gk15(f, iv.a, mid);
    auto rr = detail::gk15(f, mid, iv.b);
    if (!std::isfinite(rl.integral) || !std::isfinite(rr.integral))
      throw NonFiniteValue("integrate_adaptive: integrand");
    total += rl.integral + rr.integral - iv.integral;
    total_err += rl.error + rr.error - iv.error;
    heap[worst] = {iv.a, mid, rl.integral, rl.error};
    heap.push_back({mid, iv.b, rr.integral, rr.error});
    ++used;
  }
  return total;
}

enum class TailStatus { converged, exceeded_cap, not_converged };

struct TailResult {
  TailStatus status;
  double value;  // accumulated integral (full when converged, partial otherwise)
  double partial_at_cap;
};

// Integral of f over [a, s) with a possible integrable singularity at s,
// accumulated over dyadic subintervals shrinking toward s.  Stops early and
// reports exceeded_cap as soon as the running value passes `cap`, so callers
// can compare against a target time without waiting out a divergent tail.
template <typename F>
TailResult endpoint_tail_integral(const F& f, double a, double s, double cap,
                                  double rel_tol = 1e-12, double abs_floor = 0.0) {
  TailResult out{TailStatus::not_converged, 0.0, 0.0};
  if (a == s) {
    out.status = TailStatus::converged;
    return out;
  }
  QuadratureOptions seg_opt;
  seg_opt.rel_tol = rel_tol;
  double left = a;
  const int max_levels = 1200;  // reaches sub-denormal interval widths
  for (int k = 0; k < max_levels; ++k) {
    double right = s - 0.5 * (s - left);
    if (right <= left || right >= s || !(std::abs(s - right) > 0)) {
      // Interval width exhausted double precision: the remaining sliver
      // contributes nothing representable.
      out.status = TailStatus::converged;
      return out;
    }
    // Segments only need accuracy at the scale of the running total; a pure
    // relative target on a tiny segment would stall below rounding.
    seg_opt.abs_tol = std::max(abs_floor, 0.25 * rel_tol * (1.0 + std::abs(out.value)));
    double seg = integrate_adaptive(f, left, right, seg_opt);
    out.value += seg;
    if (out.value > cap) {
      out.status = TailStatus::exceeded_cap;
      out.partial_at_cap = out.value;
      return out;
    }
    if (std::abs(seg) <= rel_tol * std::abs(out.value) && k > 2) {
      // Geometrically vanishing dyadic terms: remaining tail below tolerance.
      out.status = TailStatus::converged;
      return out;
    }
    left = right;
  }
  return out;
}

}  // namespace psi

#endif
