#ifndef PSI_CLI_COMMANDS_HPP
#define PSI_CLI_COMMANDS_HPP

#include <iosfwd>

#include "cli/config.hpp"

namespace psi_cli {

// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

int cmd_simulate(const ExperimentConfig& cfg);
int cmd_convergence(const ExperimentConfig& cfg);
int cmd_energy_drift(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_bench(const ExperimentConfig& cfg);

}  // namespace psi_cli

#endif
