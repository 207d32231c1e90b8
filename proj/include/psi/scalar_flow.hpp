#ifndef PSI_SCALAR_FLOW_HPP
#define PSI_SCALAR_FLOW_HPP

#include <cmath>
#include <functional>
#include <limits>

#include "psi/quadrature.hpp"

namespace psi {

// dq/dt = f(q) with f continuous on the open interval (domain_lo, domain_hi).
struct ScalarAutonomousODE {
  std::function<double(double)> f;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
};

enum class FlowKind { value, equilibrium, blow_up };

struct FlowOutcome {
  FlowKind kind;
  double value = 0.0;        // final q when kind is value or equilibrium
  double escape_time = 0.0;  // only meaningful when kind is blow_up
};

namespace detail {

// Everything below works on the rightward problem f(q0) > 0; the leftward case
// is handled by reflecting q -> -q.
//
// The time to reach x is F(x) = int_{q0}^{x} dq/f(q), strictly increasing while
// f stays positive.  The solver walks right with doubling strides accumulating
// F until it passes the requested time t (ordinary value, inverted by
// safeguarded Newton) or meets a barrier first:
//   - a zero s of f:  F(s) finite   -> the flow settles at s,
//                     F(s) infinite -> the flow stays short of s, F^-1(t) < s;
//   - the domain end: F(end) <= t   -> DomainExit;
//   - + infinity:     F(inf) finite -> finite escape time (blow-up).

inline double locate_sign_change(const std::function<double(double)>& f, double lo, double hi) {
  // f(lo) > 0, f(hi) <= 0 (or non-finite).  Returns the inside endpoint (the
  // largest point known to have f > 0) so tail quadratures never evaluate the
  // integrand where f has already crossed.
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm > 0 && std::isfinite(fm))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

inline double locate_interior_dip(const std::function<double(double)>& f, double lo, double hi) {
  // Golden-section minimum of f; used when a segment quadrature blows its
  // budget without a sign change (an even-order touch of zero).
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

inline double root_solve_time(const std::function<double(double)>& f, double base_x,
                              double base_time, double hi, double t, double tol) {
  // Invert F(x) = t on [base_x, hi) given F(base_x) = base_time < t and F >= t
  // at or before hi.  Newton in x (dF/dx = 1/f) with a bisection safeguard; F
  // is advanced incrementally so each iteration integrates a short segment.
  QuadratureOptions opt;
  opt.rel_tol = std::min(1e-13, 0.01 * tol);
  opt.abs_tol = 1e-3 * tol * (1.0 + std::abs(t));
  // Relative convergence scale; the tiny floor keeps roots that sit at or
  // near zero from demanding sub-denormal refinement.
  auto scale = [](double x) { return std::max(std::abs(x), 1e-280); };
  for (int iter = 0; iter < 360; ++iter) {
    double fb = f(base_x);
    if (!(fb > 0) || !std::isfinite(fb)) return base_x;  // at the barrier up to rounding
    double step = fb * (t - base_time);
    if (std::abs(step) <= 0.25 * tol * scale(base_x + step)) return base_x + step;
    double x_new = base_x + step;
    if (!(x_new > base_x)) return base_x;
    if (x_new >= hi) x_new = base_x + 0.5 * (hi - base_x);
    if (!(x_new > base_x)) return base_x;
    double seg;
    bool diverged = false;
    try {
      seg = integrate_adaptive([&f](double q) { return 1.0 / f(q); }, base_x, x_new, opt);
    } catch (const QuadratureFailure&) {
      seg = std::numeric_limits<double>::infinity();
      diverged = true;
    }
    if (!diverged && base_time + seg <= t) {
      base_x = x_new;
      base_time += seg;
    } else {
      hi = x_new;
    }
    if (hi - base_x <= 0.25 * tol * scale(base_x)) {
      double fb2 = f(base_x);
      if (fb2 > 0 && std::isfinite(fb2)) {
        double corr = fb2 * (t - base_time);
        if (base_x + corr <= hi && corr >= 0) return base_x + corr;
      }
      return base_x;
    }
  }
  throw QuadratureFailure("solve_scalar_flow: time inversion did not converge");
}

inline FlowOutcome flow_rightward(const std::function<double(double)>& f, double domain_hi,
                                  double q0, double t, double tol) {
  QuadratureOptions opt;
  opt.rel_tol = std::min(1e-13, 0.01 * tol);
  opt.abs_tol = 1e-3 * tol * (1.0 + std::abs(t));
  auto inv_f = [&f](double q) { return 1.0 / f(q); };
  const double x_huge = 1e13 * (1.0 + std::abs(q0));
  const double x_cap = 9e299;

  double x_prev = q0;
  double time_acc = 0.0;
  double stride = 1e-3 * (1.0 + std::abs(q0));
  double prev_seg = std::numeric_limits<double>::infinity();

  for (int k = 0; k < 1200; ++k) {
    if (x_prev >= x_cap)
      throw QuadratureFailure("solve_scalar_flow: state exceeds representable range");
    double x_next = x_prev + stride;
    stride *= 2.0;
    bool at_end = false;
    if (x_next >= domain_hi) {
      x_next = domain_hi;
      at_end = true;
    }
    if (x_next > x_cap) x_next = x_cap;

    double barrier = std::numeric_limits<double>::quiet_NaN();
    bool barrier_is_zero = false;
    if (!at_end) {
      double fv = f(x_next);
      if (!(fv > 0) || !std::isfinite(fv)) {
        barrier = locate_sign_change(f, x_prev, x_next);
        barrier_is_zero = true;
      }
    } else {
      barrier = domain_hi;
    }

    if (std::isnan(barrier)) {
      double seg;
      bool dipped = false;
      try {
        seg = integrate_adaptive(inv_f, x_prev, x_next, opt);
      } catch (const QuadratureFailure&) {
        barrier = locate_interior_dip(f, x_prev, x_next);
        barrier_is_zero = true;
        dipped = true;
        seg = 0.0;
      }
      if (!dipped) {
        if (time_acc + seg >= t)
          return {FlowKind::value, root_solve_time(f, x_prev, time_acc, x_next, t, tol), 0.0};
        time_acc += seg;
        x_prev = x_next;
        if (x_prev >= x_huge && seg <= 1e-12 * (1.0 + time_acc)) {
          // Far out with geometrically vanishing contributions: F(inf) finite
          // and below t, so the solution escapes at a finite time (blow-up).
          double ratio = std::min(seg / prev_seg, 0.95);
          double remainder = seg * ratio / (1.0 - ratio);
          return {FlowKind::blow_up, 0.0, time_acc + remainder};
        }
        prev_seg = seg;
        continue;
      }
    }

    // Finite barrier: accumulate the (possibly endpoint-singular) tail up to it.
    TailResult tail = endpoint_tail_integral(inv_f, x_prev, barrier, t - time_acc, opt.rel_tol, opt.abs_tol);
    if (tail.status == TailStatus::exceeded_cap)
      return {FlowKind::value, root_solve_time(f, x_prev, time_acc, barrier, t, tol), 0.0};
    if (tail.status == TailStatus::converged) {
      if (barrier_is_zero) {
        // The flow reaches the zero s in finite time F(s) <= t and settles there.
        return {FlowKind::equilibrium, barrier, 0.0};
      }
      throw DomainExit("solve_scalar_flow: path reaches the domain boundary at time " +
                       std::to_string(time_acc + tail.value));
    }
    // Dyadic refinement exhausted double precision with F still below t: the
    // solution is indistinguishable from the barrier at working precision.
    return {FlowKind::value, barrier, 0.0};
  }
  throw QuadratureFailure("solve_scalar_flow: expansion budget exhausted");
}

}  // namespace detail

// Flows dq/dt = f(q) from q0 for time t >= 0, resolving which qualitative case
// applies and solving to relative accuracy tol.
inline FlowOutcome solve_scalar_flow(const ScalarAutonomousODE& ode, double q0, double t,
                                     double tol) {
  if (!(t >= 0)) throw std::invalid_argument("solve_scalar_flow: t must be >= 0");
  if (!(tol > 0)) throw std::invalid_argument("solve_scalar_flow: tol must be > 0");
  if (!(q0 > ode.domain_lo && q0 < ode.domain_hi))
    throw DomainExit("solve_scalar_flow: q0 outside the declared domain");
  double f0 = ode.f(q0);
  if (!std::isfinite(f0)) throw NonFiniteValue("solve_scalar_flow: f(q0) not finite");
  // Exact-zero initial slope is unattainable in floating point; below this
  // threshold the state counts as an equilibrium.  For merely continuous
  // (non-Lipschitz) f the constant solution need not be the only one; this
  // solver always returns the constant branch.
  if (std::abs(f0) <= 1e-14 * (1.0 + std::abs(q0))) return {FlowKind::equilibrium, q0, 0.0};
  if (t == 0) return {FlowKind::value, q0, 0.0};

  if (f0 > 0) return detail::flow_rightward(ode.f, ode.domain_hi, q0, t, tol);

  auto reflected = [&ode](double q) { return -ode.f(-q); };
  FlowOutcome out = detail::flow_rightward(reflected, -ode.domain_lo, -q0, t, tol);
  if (out.kind != FlowKind::blow_up) out.value = -out.value;
  return out;
}

}  // namespace psi

#endif
