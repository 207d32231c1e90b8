#ifndef PSI_TRAJECTORY_HPP
#define PSI_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "psi/types.hpp"

namespace psi {

// Time grid, states, and per-step energies of one integration run.  When
// store_states was off only times and energies are populated (long energy
// runs); otherwise lengths agree and energies[i] = H(states[i]).
template <typename Scalar>
struct TrajectoryRecord {
  std::vector<Scalar> times;
  std::vector<Vector<Scalar>> states;
  std::vector<Scalar> energies;
  std::string method_name;
  Scalar stepsize = 0;
  double wall_clock_seconds = 0;
  long record_stride = 1;

  Index steps_recorded() const { return static_cast<Index>(times.size()); }
};

}  // namespace psi

#endif
