#ifndef PSI_CLI_PRESETS_HPP
#define PSI_CLI_PRESETS_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace psi_cli {

// Named experiment presets keyed to the benchmark figures and tables; energy
// presets default to scaled horizons, with T_full selected by --full.
nlohmann::json preset(const std::string& name);
std::vector<std::string> preset_names();
// The subcommand a preset is meant for (simulate, convergence, ...).
std::string preset_command(const std::string& name);

}  // namespace psi_cli

#endif
