#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/presets.hpp"
#include "support/csv_read.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using psi_cli::config_from_json;
using psi_cli::ExperimentConfig;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("psi_test_" + name);
}

ExperimentConfig parse(const json& j) { return config_from_json(j); }

int run_binary(const std::string& args) {
  const std::string cmd = std::string(PSI_CLI_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing and validation") {
  SUBCASE("minimal simulate config") {
    auto cfg = parse({{"system", "ho"}, {"methods", {"exact"}}, {"h", 0.1}, {"n_steps", 3}});
    CHECK(cfg.system == "ho");
    CHECK(cfg.resolve_steps(0.1) == 3);
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse({{"system", "ho"}, {"bogus", 1}}), psi_cli::ConfigError);
  }

  SUBCASE("h and h_ladder are mutually exclusive") {
    CHECK_THROWS_AS(parse({{"system", "ho"}, {"h", 0.1}, {"h_ladder", {0.1, 0.05}}}),
                    psi_cli::ConfigError);
  }

  SUBCASE("unknown system and method names") {
    CHECK_THROWS_AS(parse({{"system", "nope"}}), psi_cli::ConfigError);
    CHECK_THROWS_AS(parse({{"system", "ho"}, {"methods", {"9thEPI"}}}), psi_cli::ConfigError);
  }

  SUBCASE("z0 length must match the system dimension") {
    auto cfg = parse({{"system", "gy-ex1"}, {"z0", {1.0, 2.0, 3.0}}});
    CHECK_THROWS_AS(psi_cli::instantiate(cfg), psi_cli::ConfigError);
  }

  SUBCASE("6way split only exists for cp-ex2") {
    auto cfg = parse({{"system", "gy-ex1"}, {"split", "6way"}});
    CHECK_THROWS_AS(psi_cli::instantiate(cfg), psi_cli::ConfigError);
    auto ok = parse({{"system", "cp-ex2"}, {"split", "6way"}});
    CHECK_NOTHROW(psi_cli::instantiate(ok));
  }

  SUBCASE("full horizon switch") {
    auto cfg = parse({{"system", "ho"}, {"T", 10.0}, {"T_full", 100.0}, {"full", true}});
    CHECK(cfg.horizon() == 100.0);
    auto scaled = parse({{"system", "ho"}, {"T", 10.0}, {"T_full", 100.0}});
    CHECK(scaled.horizon() == 10.0);
  }
}

TEST_CASE("presets cover the benchmark experiments and parse cleanly") {
  auto names = psi_cli::preset_names();
  CHECK(names.size() == 12);
  for (const auto& name : names) {
    CAPTURE(name);
    auto j = psi_cli::preset(name);
    CHECK_NOTHROW(parse(j));
    CHECK_FALSE(psi_cli::preset_command(name).empty());
  }
  CHECK(psi_cli::preset_command("fig1") == "convergence");
  CHECK(psi_cli::preset_command("table2") == "bench");
  // The gyrocenter defaults mirror the experiment setup.
  auto fig8 = parse(psi_cli::preset("fig8"));
  CHECK(fig8.system == "gy-ex1");
  CHECK(*fig8.h == 0.125);
}

TEST_CASE("simulate emits the documented schema") {
  auto out = temp_file("sim.csv");
  auto cfg = parse({{"system", "ho"},
                    {"methods", {"exact"}},
                    {"h", 0.1},
                    {"n_steps", 5},
                    {"out", out.string()}});
  REQUIRE(psi_cli::cmd_simulate(cfg) == 0);
  auto csv = psi_test::read_csv(out.string());
  CHECK(csv.schema == "# psi-csv v1");
  CHECK(csv.metadata.at("system") == "ho");
  REQUIRE(csv.header.size() == 6);  // step,time,z_1,z_2,H,rel_energy_err
  CHECK(csv.header[0] == "step");
  CHECK(csv.header[5] == "rel_energy_err");
  CHECK(csv.rows.size() == 6);
  CHECK(csv.rows[0][0] == "0");
  // Exact flow: the energy-error column is identically zero.
  for (const auto& row : csv.rows) CHECK(std::stod(row[5]) == 0.0);
  fs::remove(out);
}

TEST_CASE("simulate with zero steps emits only the initial row") {
  auto out = temp_file("sim0.csv");
  auto cfg = parse({{"system", "gy-ex1"},
                    {"methods", {"2ndEPI"}},
                    {"h", 0.25},
                    {"n_steps", 0},
                    {"out", out.string()}});
  REQUIRE(psi_cli::cmd_simulate(cfg) == 0);
  auto csv = psi_test::read_csv(out.string());
  REQUIRE(csv.rows.size() == 1);
  CHECK(std::stod(csv.rows[0][2]) == 30.0);  // z_1 of the default initial state
  fs::remove(out);
}

TEST_CASE("identical configs produce byte-identical files") {
  auto out1 = temp_file("det1.csv");
  auto out2 = temp_file("det2.csv");
  json base = {{"system", "cp-ex1"}, {"methods", {"2ndEPI"}}, {"h", 0.19634954084936207},
               {"n_steps", 200}};
  json j1 = base;
  j1["out"] = out1.string();
  json j2 = base;
  j2["out"] = out2.string();
  REQUIRE(psi_cli::cmd_simulate(parse(j1)) == 0);
  REQUIRE(psi_cli::cmd_simulate(parse(j2)) == 0);
  CHECK(psi_test::slurp(out1.string()) == psi_test::slurp(out2.string()));
  fs::remove(out1);
  fs::remove(out2);
}

TEST_CASE("convergence self-test mode fits the built-in quadratic data") {
  auto out = temp_file("conv_self.csv");
  auto cfg = parse({{"system", "ho"}, {"self_test", true}, {"out", out.string()}});
  REQUIRE(psi_cli::cmd_convergence(cfg) == 0);
  auto csv = psi_test::read_csv(out.string());
  REQUIRE(!csv.rows.empty());
  auto& footer = csv.rows.back();
  CHECK(footer[1] == "slope");
  CHECK(std::stod(footer[2]) == doctest::Approx(2.0).epsilon(1e-10));
  fs::remove(out);
}

TEST_CASE("energy-drift on the exact flow yields an all-zero column") {
  auto out = temp_file("drift_exact.csv");
  auto cfg = parse({{"system", "ho"},
                    {"methods", {"exact"}},
                    {"h", 0.05},
                    {"T", 100.0},
                    {"out", out.string()}});
  REQUIRE(psi_cli::cmd_energy_drift(cfg) == 0);
  auto csv = psi_test::read_csv(out.string());
  REQUIRE(csv.rows.size() > 100);
  for (const auto& row : csv.rows)
    if (row[1] != "slope") CHECK(std::stod(row[2]) <= 1e-12);
  fs::remove(out);
}

TEST_CASE("verify passes on the shipped systems and fails the negative control") {
  std::ostringstream report;
  auto cfg = parse({{"system", "cp-ex1"}, {"verify_points", 8}, {"seed", 4711}});
  CHECK(psi_cli::cmd_verify(cfg, report) == 0);
  CHECK(report.str().find("VERIFY PASS") != std::string::npos);
  CHECK(report.str().find("FAIL-expected") != std::string::npos);  // the baseline's entry

  std::ostringstream bad_report;
  auto bad = cfg;
  bad.corrupt_structure = true;
  CHECK(psi_cli::cmd_verify(bad, bad_report) == psi_cli::kExitVerifyFailure);
  CHECK(bad_report.str().find("VERIFY FAIL") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  SUBCASE("missing subcommand and bad flags are config errors") {
    CHECK(run_binary("") == psi_cli::kExitConfigError);
    CHECK(run_binary("simulate") == psi_cli::kExitConfigError);  // no config at all
  }

  SUBCASE("numerical failure surfaces as exit 3") {
    auto cfgpath = temp_file("bad_sim.json");
    {
      std::ofstream f(cfgpath);
      // cp-ex2 from outside the positive octant: first potential kick throws.
      f << R"({"system":"cp-ex2","methods":["2ndEPI"],"h":0.1,"n_steps":5,)"
        << R"("z0":[-1,2,1,1,2,2],"out":")" << temp_file("bad_sim.csv").string() << R"("})";
    }
    CHECK(run_binary("simulate --config " + cfgpath.string()) ==
          psi_cli::kExitNumericalFailure);
    fs::remove(cfgpath);
  }

  SUBCASE("verify through the binary") {
    CHECK(run_binary("verify --system gy-ex2 --points 6") == 0);
    CHECK(run_binary("verify --system cp-ex1 --points 6 --corrupt-structure") ==
          psi_cli::kExitVerifyFailure);
  }

  SUBCASE("preset and subcommand must agree") {
    CHECK(run_binary("simulate --preset fig1") == psi_cli::kExitConfigError);
  }
}

TEST_CASE("bench on the toy system produces aligned rows") {
  auto out = temp_file("bench_ho.csv");
  auto cfg = parse({{"system", "ho"},
                    {"methods", {"2ndEPI", "4thEPI1"}},
                    {"h", 0.1},
                    {"T", 5.0},
                    {"out", out.string()}});
  REQUIRE(psi_cli::cmd_bench(cfg) == 0);
  auto csv = psi_test::read_csv(out.string());
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.rows[0][0] == "2ndEPI");
  CHECK(std::stod(csv.rows[0][1]) >= 0.0);
  fs::remove(out);
}
