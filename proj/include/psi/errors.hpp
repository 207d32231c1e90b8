#ifndef PSI_ERRORS_HPP
#define PSI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psi {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The solution path leaves the open interval / region on which the flow is defined.
struct DomainExit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// |a12 b3 - a13 b2 + a23 b1| fell below the degeneracy threshold, R(Z) undefined.
struct DegenerateStructure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSubflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonMonotone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scalar flow reached its finite escape time before the requested time.
struct FlowBlowUp : std::runtime_error {
  double escape_time;
  FlowBlowUp(const std::string& what, double t_escape)
      : std::runtime_error(what), escape_time(t_escape) {}
};

struct NonConvergence : std::runtime_error {
  int iterations;
  double residual;
  NonConvergence(const std::string& what, int iters, double res)
      : std::runtime_error(what), iterations(iters), residual(res) {}
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ZeroInitialEnergy : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DegenerateFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReferenceInconsistent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Carries the step index at which a trajectory integration aborted.
struct IntegrationError : std::runtime_error {
  long step_index;
  IntegrationError(const std::string& what, long step)
      : std::runtime_error(what), step_index(step) {}
};

}  // namespace psi

#endif
