#include "cli/config.hpp"

#include <cmath>
#include <set>

namespace psi_cli {

namespace {

const std::set<std::string> kSystems = {"cp-ex1", "cp-ex2", "gy-ex1", "gy-ex2", "ho"};
const std::set<std::string> kMethods = {"1stEPI", "2ndEPI", "4thEPI1", "4thEPI2",
                                        "4thloba", "6thloba", "exact"};
const std::set<std::string> kKeys = {
    "system", "methods", "z0", "h", "h_ladder", "T", "n_steps", "params", "seed",
    "out", "split", "record_stride", "full", "T_full", "threads", "self_test",
    "corrupt_structure", "verify_points", "refinement", "strang_variant"};

}  // namespace

long ExperimentConfig::resolve_steps(double step) const {
  if (n_steps) return *n_steps;
  if (!t_final) throw ConfigError("config: one of T or n_steps is required");
  return std::lround(horizon() / step);
}

double ExperimentConfig::horizon() const {
  if (!t_final) throw ConfigError("config: T is required");
  if (full_horizon && t_full) return *t_full;
  return *t_final;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kKeys.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "'");

  ExperimentConfig cfg;
  try {
    if (!j.contains("system")) throw ConfigError("config: 'system' is required");
    cfg.system = j.at("system").get<std::string>();
    if (!kSystems.count(cfg.system)) throw ConfigError("config: unknown system " + cfg.system);

    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) {
        std::string name = m.get<std::string>();
        if (!kMethods.count(name)) throw ConfigError("config: unknown method " + name);
        cfg.methods.push_back(name);
      }
    }
    if (j.contains("z0")) {
      auto v = j.at("z0").get<std::vector<double>>();
      psi::Vector<double> z(static_cast<psi::Index>(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) z[static_cast<psi::Index>(i)] = v[i];
      cfg.z0 = z;
    }
    if (j.contains("h")) cfg.h = j.at("h").get<double>();
    if (j.contains("h_ladder")) cfg.h_ladder = j.at("h_ladder").get<std::vector<double>>();
    if (cfg.h && !cfg.h_ladder.empty())
      throw ConfigError("config: exactly one of h / h_ladder may be given");
    if (j.contains("T")) cfg.t_final = j.at("T").get<double>();
    if (j.contains("n_steps")) cfg.n_steps = j.at("n_steps").get<long>();
    if (j.contains("params")) {
      const auto& p = j.at("params");
      for (auto it = p.begin(); it != p.end(); ++it) {
        const std::string& k = it.key();
        if (k == "m")
          cfg.params.mass = it.value().get<double>();
        else if (k == "q")
          cfg.params.charge = it.value().get<double>();
        else if (k == "mu") {
          cfg.params.mu_gy1 = it.value().get<double>();
          cfg.params.mu_gy2 = it.value().get<double>();
        } else if (k == "a")
          cfg.params.a = it.value().get<double>();
        else if (k == "b")
          cfg.params.b = it.value().get<double>();
        else
          throw ConfigError("config: unknown model parameter '" + k + "'");
      }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long>();
    if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
    if (j.contains("split")) {
      std::string s = j.at("split").get<std::string>();
      if (s == "6way")
        cfg.use_alt_split = true;
      else if (s != "4way")
        throw ConfigError("config: split must be 4way or 6way");
    }
    if (j.contains("record_stride")) cfg.record_stride = j.at("record_stride").get<long>();
    if (cfg.record_stride < 1) throw ConfigError("config: record_stride must be >= 1");
    if (j.contains("full")) cfg.full_horizon = j.at("full").get<bool>();
    if (j.contains("T_full")) cfg.t_full = j.at("T_full").get<double>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
    if (j.contains("self_test")) cfg.self_test = j.at("self_test").get<bool>();
    if (j.contains("corrupt_structure"))
      cfg.corrupt_structure = j.at("corrupt_structure").get<bool>();
    if (j.contains("verify_points")) cfg.verify_points = j.at("verify_points").get<int>();
    if (j.contains("refinement")) cfg.refinement = j.at("refinement").get<long>();
    if (cfg.refinement < 2) throw ConfigError("config: refinement must be >= 2");
    if (j.contains("strang_variant")) {
      cfg.strang_variant = j.at("strang_variant").get<std::string>();
      if (cfg.strang_variant != "adjoint-outer" && cfg.strang_variant != "adjoint-inner")
        throw ConfigError("config: strang_variant must be adjoint-outer or adjoint-inner");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.h && !(*cfg.h > 0)) throw ConfigError("config: h must be > 0");
  for (double h : cfg.h_ladder)
    if (!(h > 0)) throw ConfigError("config: h_ladder entries must be > 0");
  return cfg;
}

nlohmann::json merged(nlohmann::json base, const nlohmann::json& overlay) {
  for (auto it = overlay.begin(); it != overlay.end(); ++it) base[it.key()] = it.value();
  return base;
}

psi::ModelInstance instantiate(const ExperimentConfig& cfg) {
  psi::ModelInstance inst = psi::make_model(cfg.system, cfg.params);
  if (cfg.z0) {
    if (cfg.z0->size() != inst.system.dim)
      throw ConfigError("config: z0 length " + std::to_string(cfg.z0->size()) +
                        " does not match system dimension " + std::to_string(inst.system.dim));
    inst.z0 = *cfg.z0;
  }
  if (cfg.use_alt_split && !inst.alt_split)
    throw ConfigError("config: system " + cfg.system + " has no 6way split");
  return inst;
}

psi::Integrator<double> build_method(const std::string& name, const ExperimentConfig& cfg,
                                     const psi::ModelInstance& inst,
                                     psi::ImplicitSolveSettings<double> rk) {
  const psi::StrangVariant variant = cfg.strang_variant == "adjoint-inner"
                                         ? psi::StrangVariant::adjoint_inner
                                         : psi::StrangVariant::adjoint_outer;
  return psi::make_method(name, inst, cfg.use_alt_split, variant, rk);
}

}  // namespace psi_cli
