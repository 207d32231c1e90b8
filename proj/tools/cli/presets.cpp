#include "cli/presets.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace psi_cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::map<std::string, std::pair<std::string, nlohmann::json>> build_presets() {
  using nlohmann::json;
  std::map<std::string, std::pair<std::string, json>> p;

  // Charged particle, first field configuration.
  p["fig1"] = {"convergence",
               {{"system", "cp-ex1"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2"}},
                {"h_ladder", {kPi / 40, kPi / 80, kPi / 160, kPi / 320}},
                {"T", 1000 * kPi},
                {"out", "fig1.csv"}}};
  p["fig2"] = {"simulate",
               {{"system", "cp-ex1"},
                {"methods", {"2ndEPI"}},
                {"h", kPi / 10},
                {"T", 1000 * kPi},
                {"out", "fig2.csv"}}};
  p["fig3"] = {"energy-drift",
               {{"system", "cp-ex1"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2", "4thloba", "6thloba"}},
                {"h", kPi / 40},
                {"T", 1e4 * kPi},
                {"T_full", 1e6 * kPi},
                {"record_stride", 50},
                {"out", "fig3.csv"}}};

  // Charged particle, second field configuration.
  p["fig4"] = {"convergence",
               {{"system", "cp-ex2"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2"}},
                {"h_ladder", {kPi / 40, kPi / 80, kPi / 160, kPi / 320}},
                {"T", 100 * kPi},
                {"out", "fig4.csv"}}};
  p["fig5"] = {"energy-drift",
               {{"system", "cp-ex2"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2", "4thloba", "6thloba"}},
                {"h", kPi / 10},
                {"T", 1e4 * kPi},
                {"T_full", 1e5 * kPi},
                {"record_stride", 10},
                {"out", "fig5.csv"}}};

  // Gyrocenter, first configuration.
  p["fig6"] = {"convergence",
               {{"system", "gy-ex1"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2"}},
                {"h_ladder", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}},
                {"T", 100.0},
                {"out", "fig6.csv"}}};
  p["fig7"] = {"simulate",
               {{"system", "gy-ex1"},
                {"methods", {"2ndEPI"}},
                {"h", 0.25},
                {"T", 20000.0},
                {"record_stride", 4},
                {"out", "fig7.csv"}}};
  p["fig8"] = {"energy-drift",
               {{"system", "gy-ex1"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2", "4thloba", "6thloba"}},
                {"h", 0.125},
                {"T", 1e4},
                {"T_full", 60000.0},
                {"record_stride", 20},
                {"out", "fig8.csv"}}};

  // Gyrocenter, second configuration.
  p["fig9"] = {"convergence",
               {{"system", "gy-ex2"},
                {"methods", {"2ndEPI", "4thEPI1", "4thEPI2"}},
                {"h_ladder", {0.05, 0.025, 0.0125, 0.00625}},
                {"T", 20.0},
                {"out", "fig9.csv"}}};
  p["fig10"] = {"energy-drift",
                {{"system", "gy-ex2"},
                 {"methods", {"2ndEPI", "4thEPI1", "4thEPI2", "4thloba", "6thloba"}},
                 {"h", 0.1},
                 {"T", 1e4},
                 {"T_full", 50000.0},
                 {"record_stride", 25},
                 {"out", "fig10.csv"}}};

  p["table1"] = {"bench",
                 {{"system", "cp-ex2"},
                  {"methods", {"2ndEPI", "4thloba", "4thEPI1", "4thEPI2", "6thloba"}},
                  {"h", kPi / 10},
                  {"T", 1000 * kPi},
                  {"out", "table1.csv"}}};
  p["table2"] = {"bench",
                 {{"system", "gy-ex2"},
                  {"methods", {"2ndEPI", "4thloba", "4thEPI1", "4thEPI2", "6thloba"}},
                  {"h", 0.1},
                  {"T", 200.0},
                  {"out", "table2.csv"}}};
  return p;
}

const std::map<std::string, std::pair<std::string, nlohmann::json>>& presets() {
  static const auto p = build_presets();
  return p;
}

}  // namespace

nlohmann::json preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw std::invalid_argument("unknown preset: " + name);
  return it->second.second;
}

std::string preset_command(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw std::invalid_argument("unknown preset: " + name);
  return it->second.first;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets()) names.push_back(k);
  return names;
}

}  // namespace psi_cli
