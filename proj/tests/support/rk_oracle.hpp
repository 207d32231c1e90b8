#ifndef PSI_TESTS_RK_ORACLE_HPP
#define PSI_TESTS_RK_ORACLE_HPP

// Adaptive Dormand-Prince 5(4) integrator, used as the independent oracle for
// exact flows and subflows.  Deliberately shares no code with the library
// integrators (explicit embedded pair vs implicit collocation).

#include <cmath>
#include <functional>
#include <stdexcept>

#include "psi/types.hpp"

namespace psi_test {

using Vec = psi::Vector<double>;

struct OracleOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  long max_steps = 2000000;
  // Invoked with each accepted state; may be used to track path properties.
  std::function<void(double t, const Vec&)> observer;
};

template <typename F>
Vec dp45(const F& f, double t0, Vec y, double t1, const OracleOptions& opt = {}) {
  if (t1 == t0) return y;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::max(1e-8, 1e-3 * std::abs(t1 - t0));
  Vec k1 = f(t, y);
  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (t + h - t1) > 0) h = t1 - t;
    const Vec k2 = f(t + h / 5.0, (y + h / 5.0 * k1).eval());
    const Vec k3 = f(t + 3.0 * h / 10.0, (y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)).eval());
    const Vec k4 =
        f(t + 4.0 * h / 5.0,
          (y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)).eval());
    const Vec k5 = f(t + 8.0 * h / 9.0,
                     (y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                               64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4))
                         .eval());
    const Vec k6 =
        f(t + h, (y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 + 46732.0 / 5247.0 * k3 +
                           49.0 / 176.0 * k4 - 5103.0 / 18656.0 * k5))
                     .eval());
    const Vec y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                            2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    const Vec k7 = f(t + h, y5);
    const Vec y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 + 393.0 / 640.0 * k4 -
                            92097.0 / 339200.0 * k5 + 187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);
    double err = 0;
    for (psi::Index i = 0; i < y.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      if (opt.observer) opt.observer(t, y);
      if (t == t1) return y;
    }
    const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, fac));
    if (std::abs(h) < 1e-15 * (1.0 + std::abs(t)))
      throw std::runtime_error("dp45: stepsize underflow");
  }
  throw std::runtime_error("dp45: step budget exhausted");
}

// Scalar convenience wrapper for dq/dt = f(q).
template <typename F>
double dp45_scalar(const F& f, double q0, double t1, const OracleOptions& opt = {}) {
  Vec y(1);
  y[0] = q0;
  auto rhs = [&f](double, const Vec& v) {
    Vec out(1);
    out[0] = f(v[0]);
    return out;
  };
  return dp45(rhs, 0.0, y, t1, opt)[0];
}

}  // namespace psi_test

#endif
