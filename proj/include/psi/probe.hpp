#ifndef PSI_PROBE_HPP
#define PSI_PROBE_HPP

#include <functional>
#include <random>
#include <stdexcept>

#include "psi/types.hpp"

namespace psi {

// Box from which property tests and the verify command draw probe states,
// chosen away from each model's singular set.
template <typename Scalar>
struct ProbeRegion {
  Vector<Scalar> lo;
  Vector<Scalar> hi;
  std::function<bool(const Vector<Scalar>&)> admissible;

  template <typename Rng>
  Vector<Scalar> sample(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector<Scalar> z(lo.size());
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (Index i = 0; i < lo.size(); ++i) z[i] = lo[i] + (hi[i] - lo[i]) * Scalar(u(rng));
      if (!admissible || admissible(z)) return z;
    }
    throw std::runtime_error("ProbeRegion: no admissible sample found");
  }
};

}  // namespace psi

#endif
