#ifndef PSI_CLI_CONFIG_HPP
#define PSI_CLI_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "psi/model_registry.hpp"

namespace psi_cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string system;
  std::vector<std::string> methods;
  std::optional<psi::Vector<double>> z0;
  std::optional<double> h;
  std::vector<double> h_ladder;
  std::optional<double> t_final;
  std::optional<long> n_steps;
  psi::ModelParams params;
  unsigned long seed = 12345;
  std::string out_path;
  bool use_alt_split = false;  // cp-ex2 "split": "6way"
  long record_stride = 1;
  bool full_horizon = false;
  std::optional<double> t_full;  // horizon used when full_horizon is set
  int threads = 1;
  bool self_test = false;
  bool corrupt_structure = false;
  int verify_points = 20;
  long refinement = 20;
  std::string strang_variant = "adjoint-outer";

  // Step count of a single run: n_steps wins, otherwise round(T/h).
  long resolve_steps(double step) const;
  double horizon() const;
};

// Parses and validates a config tree; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json merged(nlohmann::json base, const nlohmann::json& overlay);

// Builds the model and checks config/system consistency (z0 length, methods).
psi::ModelInstance instantiate(const ExperimentConfig& cfg);

psi::Integrator<double> build_method(const std::string& name, const ExperimentConfig& cfg,
                                     const psi::ModelInstance& inst,
                                     psi::ImplicitSolveSettings<double> rk = {});

}  // namespace psi_cli

#endif
