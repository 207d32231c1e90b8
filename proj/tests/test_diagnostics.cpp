#include <doctest.h>

#include <cmath>
#include <random>

#include "psi/diagnostics.hpp"
#include "psi/model_registry.hpp"

using psi::TrajectoryRecord;
using psi::Vector;

namespace {

TrajectoryRecord<double> synthetic_traj(int n, double h, double offset = 0.0) {
  TrajectoryRecord<double> t;
  for (int i = 0; i <= n; ++i) {
    t.times.push_back(i * h);
    Vector<double> z(2);
    z << std::cos(i * h) + offset, std::sin(i * h);
    t.states.push_back(z);
    t.energies.push_back(0.5);
  }
  return t;
}

}  // namespace

TEST_CASE("global_error") {
  auto a = synthetic_traj(50, 0.1);
  std::vector<std::vector<psi::Index>> groups = {{0}, {1}};

  SUBCASE("identical trajectories have zero error") {
    auto ge = global_error(a, a, groups);
    CHECK(ge[0] == 0.0);
    CHECK(ge[1] == 0.0);
  }

  SUBCASE("constant offset in one group is picked up exactly") {
    auto b = synthetic_traj(50, 0.1, 0.25);
    auto ge = global_error(b, a, groups);
    CHECK(ge[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ge[1] == 0.0);
  }

  SUBCASE("symmetry and triangle inequality per group") {
    auto b = synthetic_traj(50, 0.1, 0.2);
    auto c = synthetic_traj(50, 0.1, -0.1);
    auto ab = global_error(a, b, groups);
    auto ba = global_error(b, a, groups);
    auto ac = global_error(a, c, groups);
    auto cb = global_error(c, b, groups);
    for (int g = 0; g < 2; ++g) {
      CHECK(ab[g] == ba[g]);
      CHECK(ab[g] <= ac[g] + cb[g] + 1e-15);
    }
  }

  SUBCASE("grid mismatch is rejected") {
    auto b = synthetic_traj(49, 0.1);
    CHECK_THROWS_AS(global_error(a, b, groups), psi::GridMismatch);
    auto c = synthetic_traj(50, 0.1001);
    CHECK_THROWS_AS(global_error(a, c, groups), psi::GridMismatch);
  }
}

TEST_CASE("relative_energy_error_series") {
  TrajectoryRecord<double> t;
  t.times = {0, 1, 2};
  t.energies = {2.0, 2.0, 1.9};
  auto s = relative_energy_error_series(t);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
  CHECK(s[2] == doctest::Approx(0.05).epsilon(1e-12));

  SUBCASE("zero initial energy is rejected") {
    t.energies = {0.0, 1.0, 2.0};
    CHECK_THROWS_AS(relative_energy_error_series(t), psi::ZeroInitialEnergy);
  }

  SUBCASE("exact-flow trajectory gives the zero series") {
    auto inst = psi::make_harmonic_oscillator();
    auto exact = psi::make_ho_exact_integrator();
    auto rec = integrate(exact, inst.system.hamiltonian, inst.z0, 0.1, 200);
    auto series = relative_energy_error_series(rec);
    for (double e : series) CHECK(e <= 1e-12);
  }
}

TEST_CASE("estimate_order") {
  SUBCASE("clean quadratic decay") {
    std::vector<std::pair<double, double>> pts;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) pts.emplace_back(h, 3.0 * h * h);
    auto rep = psi::estimate_order(pts);
    CHECK(rep.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.dropped_points == 0);
  }

  SUBCASE("slope is invariant under rescaling the errors") {
    std::vector<std::pair<double, double>> pts, scaled;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
      pts.emplace_back(h, 3.0 * h * h);
      scaled.emplace_back(h, 300.0 * h * h);
    }
    CHECK(std::abs(psi::estimate_order(pts).slope - psi::estimate_order(scaled).slope) <= 1e-12);
  }

  SUBCASE("noisy quartic decay") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> pts;
    for (double h : {0.2, 0.1, 0.05, 0.025, 0.0125})
      pts.emplace_back(h, 2.0 * h * h * h * h * (1.0 + noise(rng)));
    auto rep = psi::estimate_order(pts);
    CHECK(rep.slope == doctest::Approx(4.0).epsilon(0.0125));
  }

  SUBCASE("floor points are dropped with notice; too few points degenerate") {
    std::vector<std::pair<double, double>> pts = {
        {0.1, 1e-2}, {0.05, 2.5e-3}, {0.025, 6.25e-4}, {0.0125, 1e-16}};
    auto rep = psi::estimate_order(pts);
    CHECK(rep.dropped_points == 1);
    CHECK(rep.slope == doctest::Approx(2.0).epsilon(1e-6));
    std::vector<std::pair<double, double>> bad = {{0.1, 1e-16}, {0.05, 1e-16}, {0.025, 1e-2}};
    CHECK_THROWS_AS(psi::estimate_order(bad), psi::DegenerateFit);
  }
}

TEST_CASE("drift_slope") {
  std::vector<double> times, flat, linear;
  for (int i = 0; i < 500; ++i) {
    times.push_back(0.5 * i);
    flat.push_back(0.25);
    linear.push_back(3e-7 * 0.5 * i);
  }
  CHECK(psi::drift_slope(flat, times) == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(psi::drift_slope(linear, times) == doctest::Approx(3e-7).epsilon(1e-12));
  std::vector<double> tiny(times.begin(), times.begin() + 50);
  std::vector<double> tiny_s(flat.begin(), flat.begin() + 50);
  CHECK_THROWS_AS(psi::drift_slope(tiny_s, tiny), std::invalid_argument);
}

TEST_CASE("reference_trajectory") {
  auto inst = psi::make_harmonic_oscillator();

  SUBCASE("refinement 1 degenerates to a plain coarse run") {
    auto ref = reference_trajectory(inst.system, inst.z0, 0.1, 20, 1);
    CHECK(ref.times.size() == 21);
    CHECK(ref.times.back() == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("doubled refinement changes nothing measurable") {
    auto r20 = reference_trajectory(inst.system, inst.z0, 0.1, 50, 20);
    auto r40 = reference_trajectory(inst.system, inst.z0, 0.1, 50, 40);
    CHECK(trajectory_distance(r20, r40) <= 1e-12);
  }

  SUBCASE("reference energy drift is negligible") {
    auto ref = reference_trajectory(inst.system, inst.z0, 0.1, 100, 20);
    auto series = relative_energy_error_series(ref);
    for (double e : series) CHECK(e <= 1e-10);
  }

  SUBCASE("exact rotation against the reference is at solver accuracy") {
    auto exact = psi::make_ho_exact_integrator();
    auto traj = integrate(exact, inst.system.hamiltonian, inst.z0, 0.1, 50);
    auto ref = reference_trajectory(inst.system, inst.z0, 0.1, 50, 20);
    auto ge = global_error(traj, ref, inst.error_groups);
    CHECK(ge[0] <= 1e-10);
    CHECK(ge[1] <= 1e-10);
  }
}

TEST_CASE("timing_run smoke") {
  auto inst = psi::make_harmonic_oscillator();
  auto strang = psi::make_method("2ndEPI", inst);
  auto table = psi::timing_run({strang}, inst.system.hamiltonian, inst.z0, 0.1, 0.1, 3);
  REQUIRE(table.size() == 1);
  CHECK(table[0].method == "2ndEPI");
  CHECK(table[0].median_seconds >= 0.0);
  CHECK(table[0].median_seconds < 1.0);  // one-step runs are near-instant
}
