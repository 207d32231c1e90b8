#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/presets.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::string system;
  long seed = -1;
  bool full = false;
  int threads = 0;
  int points = 0;
  bool corrupt_structure = false;
  bool self_test = false;
};

void add_common(CLI::App* cmd, GlobalFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Path to a JSON experiment config");
  cmd->add_option("--preset", flags.preset_name, "Named preset (fig1..fig10, table1, table2)");
  cmd->add_option("--out", flags.out_path, "Output CSV path");
  cmd->add_option("--seed", flags.seed, "Probe RNG seed");
  cmd->add_option("--system", flags.system, "System name (cp-ex1, cp-ex2, gy-ex1, gy-ex2)");
  cmd->add_option("--threads", flags.threads, "Worker threads for independent runs");
  cmd->add_flag("--full", flags.full, "Run the full (unscaled) horizon");
}

nlohmann::json resolve_config(const GlobalFlags& flags, const std::string& command) {
  nlohmann::json j = nlohmann::json::object();
  if (!flags.preset_name.empty()) {
    if (psi_cli::preset_command(flags.preset_name) != command)
      throw psi_cli::ConfigError("preset " + flags.preset_name + " belongs to subcommand " +
                                 psi_cli::preset_command(flags.preset_name));
    j = psi_cli::preset(flags.preset_name);
  }
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw psi_cli::ConfigError("cannot open config file " + flags.config_path);
    nlohmann::json file_cfg;
    try {
      in >> file_cfg;
    } catch (const nlohmann::json::exception& e) {
      throw psi_cli::ConfigError(std::string("config parse error: ") + e.what());
    }
    j = psi_cli::merged(j, file_cfg);
  }
  if (!flags.out_path.empty()) j["out"] = flags.out_path;
  if (!flags.system.empty()) j["system"] = flags.system;
  if (flags.seed >= 0) j["seed"] = flags.seed;
  if (flags.full) j["full"] = true;
  if (flags.threads > 0) j["threads"] = flags.threads;
  if (flags.points > 0) j["verify_points"] = flags.points;
  if (flags.corrupt_structure) j["corrupt_structure"] = true;
  if (flags.self_test) j["self_test"] = true;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splitting-based Poisson integrators: simulation and verification bench"};
  app.require_subcommand(1);

  GlobalFlags flags;
  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory to CSV");
  auto* convergence = app.add_subcommand("convergence", "Global-error ladder and fitted orders");
  auto* drift = app.add_subcommand("energy-drift", "Relative energy error series and drift slopes");
  auto* verify = app.add_subcommand("verify", "Structural residual checks");
  auto* bench = app.add_subcommand("bench", "Wall-clock timing table");
  for (auto* cmd : {simulate, convergence, drift, verify, bench}) add_common(cmd, flags);
  verify->add_option("--points", flags.points, "Number of probe points");
  verify->add_flag("--corrupt-structure", flags.corrupt_structure,
                   "Negative control: corrupt one structure entry");
  convergence->add_flag("--self-test", flags.self_test,
                        "Fit built-in quadratic decay data instead of integrating");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : psi_cli::kExitConfigError;
  }

  std::string command;
  if (simulate->parsed()) command = "simulate";
  if (convergence->parsed()) command = "convergence";
  if (drift->parsed()) command = "energy-drift";
  if (verify->parsed()) command = "verify";
  if (bench->parsed()) command = "bench";

  try {
    auto cfg = psi_cli::config_from_json(resolve_config(flags, command));
    if (command == "simulate") return psi_cli::cmd_simulate(cfg);
    if (command == "convergence") return psi_cli::cmd_convergence(cfg);
    if (command == "energy-drift") return psi_cli::cmd_energy_drift(cfg);
    if (command == "verify") return psi_cli::cmd_verify(cfg, std::cout);
    if (command == "bench") return psi_cli::cmd_bench(cfg);
  } catch (const psi_cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return psi_cli::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return psi_cli::kExitConfigError;
  } catch (const psi::IntegrationError& e) {
    std::cerr << "numerical failure at step " << e.step_index << ": " << e.what() << "\n";
    return psi_cli::kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return psi_cli::kExitNumericalFailure;
  }
  return psi_cli::kExitConfigError;
}
