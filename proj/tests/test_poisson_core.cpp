#include <doctest.h>

#include <random>

#include "psi/poisson.hpp"
#include "psi/verify.hpp"

using psi::DependencyPattern;
using psi::Index;
using psi::Matrix;
using psi::PoissonSystem;
using psi::ScalarField;
using psi::StructureMatrixField;
using psi::Vector;

namespace {

constexpr unsigned kSeed = 20240611;

StructureMatrixField<double> canonical2d() {
  StructureMatrixField<double> r;
  r.dim = 2;
  r.evaluate = [](const Vector<double>&) {
    Matrix<double> m(2, 2);
    m << 0, 1, -1, 0;
    return m;
  };
  return r;
}

// so(3)* rigid-body bracket: R(z) = hat(z), a state-dependent structure that
// satisfies the compatibility condition.
StructureMatrixField<double> rigid_body() {
  StructureMatrixField<double> r;
  r.dim = 3;
  r.evaluate = [](const Vector<double>& z) {
    Matrix<double> m(3, 3);
    m << 0, -z[2], z[1], z[2], 0, -z[0], -z[1], z[0], 0;
    return m;
  };
  return r;
}

Vector<double> random_state(std::mt19937_64& rng, Index m, double lo = -2, double hi = 2) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector<double> z(m);
  for (Index i = 0; i < m; ++i) z[i] = u(rng);
  return z;
}

}  // namespace

TEST_CASE("eval_vector_field on the canonical oscillator") {
  PoissonSystem<double> sys;
  sys.dim = 2;
  sys.structure = canonical2d();
  sys.hamiltonian.value = [](const Vector<double>& z) {
    return 0.5 * (z[0] * z[0] + z[1] * z[1]);
  };
  sys.hamiltonian.gradient = [](const Vector<double>& z) { return z; };

  Vector<double> z(2);
  z << 0.3, -0.7;
  Vector<double> f = eval_vector_field(sys, z);
  CHECK(f[0] == doctest::Approx(-0.7).epsilon(1e-14));
  CHECK(f[1] == doctest::Approx(-0.3).epsilon(1e-14));

  SUBCASE("gradient zero gives the zero field") {
    z.setZero();
    CHECK(eval_vector_field(sys, z).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("length mismatch is rejected") {
    Vector<double> bad(3);
    bad.setOnes();
    CHECK_THROWS_AS(eval_vector_field(sys, bad), psi::DimensionMismatch);
  }
  SUBCASE("singular Hamiltonian values are rejected") {
    PoissonSystem<double> sing = sys;
    sing.hamiltonian.value = [](const Vector<double>& z) { return 1.0 / z[0]; };
    sing.hamiltonian.gradient = nullptr;
    Vector<double> origin(2);
    origin << 0.0, 1.0;
    CHECK_THROWS_AS(eval_vector_field(sing, origin), psi::NonFiniteValue);
  }
}

TEST_CASE("poisson_bracket basics") {
  auto r = rigid_body();
  std::mt19937_64 rng(kSeed);
  INFO("seed ", kSeed);

  ScalarField<double> f{[](const Vector<double>& z) { return z[0] * z[0] + 0.3 * z[1]; },
                        [](const Vector<double>& z) {
                          Vector<double> g3(3);
                          g3 << 2 * z[0], 0.3, 0;
                          return g3;
                        }};
  ScalarField<double> g{[](const Vector<double>& z) { return std::sin(z[1]) + z[2]; },
                        [](const Vector<double>& z) {
                          Vector<double> g3(3);
                          g3 << 0, std::cos(z[1]), 1;
                          return g3;
                        }};
  ScalarField<double> w{[](const Vector<double>& z) { return z[0] * z[1] * z[2]; },
                        [](const Vector<double>& z) {
                          Vector<double> g3(3);
                          g3 << z[1] * z[2], z[0] * z[2], z[0] * z[1];
                          return g3;
                        }};

  SUBCASE("bracket of a field with itself vanishes") {
    for (int i = 0; i < 10; ++i) {
      auto z = random_state(rng, 3);
      CHECK(std::abs(poisson_bracket(f, f, r, z)) <= 1e-12);
    }
  }

  SUBCASE("coordinate functions extract structure entries") {
    ScalarField<double> z1{[](const Vector<double>& z) { return z[0]; }, nullptr};
    ScalarField<double> z2{[](const Vector<double>& z) { return z[1]; }, nullptr};
    for (int i = 0; i < 5; ++i) {
      auto z = random_state(rng, 3);
      CHECK(poisson_bracket(z1, z2, r, z) ==
            doctest::Approx(r(z)(0, 1)).epsilon(1e-9));
    }
  }

  SUBCASE("bilinearity") {
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 10; ++i) {
      auto z = random_state(rng, 3);
      const double a = u(rng), b = u(rng);
      ScalarField<double> lin{
          [a, b, &f, &g](const Vector<double>& zz) { return a * f(zz) + b * g(zz); },
          [a, b, &f, &g](const Vector<double>& zz) {
            return (a * f.grad(zz) + b * g.grad(zz)).eval();
          }};
      const double lhs = poisson_bracket(lin, w, r, z);
      const double rhs = a * poisson_bracket(f, w, r, z) + b * poisson_bracket(g, w, r, z);
      const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }

  SUBCASE("skew-symmetry") {
    for (int i = 0; i < 10; ++i) {
      auto z = random_state(rng, 3);
      CHECK(poisson_bracket(f, g, r, z) ==
            doctest::Approx(-poisson_bracket(g, f, r, z)).epsilon(1e-12));
    }
  }

  SUBCASE("Leibniz rule") {
    for (int i = 0; i < 10; ++i) {
      auto z = random_state(rng, 3);
      ScalarField<double> fg{[&f, &g](const Vector<double>& zz) { return f(zz) * g(zz); },
                             [&f, &g](const Vector<double>& zz) {
                               return (f.grad(zz) * g(zz) + g.grad(zz) * f(zz)).eval();
                             }};
      const double lhs = poisson_bracket(fg, w, r, z);
      const double rhs = poisson_bracket(f, w, r, z) * g(z) + f(z) * poisson_bracket(g, w, r, z);
      const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
  }

  SUBCASE("bracket Jacobi identity with finite-difference inner gradients") {
    auto bracket_field = [&r](const ScalarField<double>& aa, const ScalarField<double>& bb) {
      return ScalarField<double>{
          [aa, bb, r](const Vector<double>& zz) { return poisson_bracket(aa, bb, r, zz); },
          nullptr};
    };
    for (int i = 0; i < 5; ++i) {
      auto z = random_state(rng, 3, 0.5, 2.0);
      const double s = poisson_bracket(bracket_field(f, g), w, r, z) +
                       poisson_bracket(bracket_field(g, w), f, r, z) +
                       poisson_bracket(bracket_field(w, f), g, r, z);
      CHECK(std::abs(s) <= 1e-6);
    }
  }

  SUBCASE("dimension mismatch") {
    Vector<double> bad(2);
    bad.setOnes();
    CHECK_THROWS_AS(poisson_bracket(f, g, r, bad), psi::DimensionMismatch);
  }
}

TEST_CASE("check_skew_symmetry") {
  auto r = rigid_body();
  std::mt19937_64 rng(kSeed + 1);
  for (int i = 0; i < 5; ++i) {
    auto z = random_state(rng, 3);
    CHECK(check_skew_symmetry(r, z) == 0.0);  // built skew entry by entry
  }

  StructureMatrixField<double> fake;
  fake.dim = 3;
  fake.evaluate = [](const Vector<double>&) { return Matrix<double>::Identity(3, 3); };
  Vector<double> z(3);
  z.setOnes();
  CHECK(check_skew_symmetry(fake, z) == doctest::Approx(2.0));
}

TEST_CASE("check_jacobi_identity") {
  std::mt19937_64 rng(kSeed + 2);
  Vector<double> z = random_state(rng, 3);

  SUBCASE("constant structure has zero residual") {
    StructureMatrixField<double> r;
    r.dim = 4;
    r.evaluate = [](const Vector<double>&) {
      Matrix<double> m = Matrix<double>::Zero(4, 4);
      m(0, 2) = 1;
      m(2, 0) = -1;
      m(1, 3) = 1;
      m(3, 1) = -1;
      return m;
    };
    Vector<double> z4 = random_state(rng, 4);
    CHECK(check_jacobi_identity(r, z4, 1e-5) <= 1e-12);
  }

  SUBCASE("rigid-body structure satisfies the identity") {
    CHECK(check_jacobi_identity(rigid_body(), z, 1e-5) <= 1e-9);
  }

  SUBCASE("corrupted entry is caught") {
    StructureMatrixField<double> bad;
    bad.dim = 3;
    bad.evaluate = [](const Vector<double>& zz) {
      Matrix<double> m = Matrix<double>::Zero(3, 3);
      m(0, 1) = zz[0];  // r12 = z1 breaks the cyclic sum against r13 = z2
      m(1, 0) = -zz[0];
      m(0, 2) = zz[1];
      m(2, 0) = -zz[1];
      return m;
    };
    Vector<double> probe(3);
    probe << 0.7, 1.3, -0.4;
    CHECK(check_jacobi_identity(bad, probe, 1e-5) > 1e-3);
  }
}

TEST_CASE("numerical_jacobian") {
  std::mt19937_64 rng(kSeed + 3);
  Vector<double> z = random_state(rng, 4);

  SUBCASE("identity map") {
    psi::FlowMap<double> id = [](const Vector<double>& y) { return y; };
    Matrix<double> j = psi::numerical_jacobian(id, z, 1e-5);
    CHECK((j - Matrix<double>::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("linear map recovers its matrix") {
    Matrix<double> m(4, 4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) m(i, j) = u(rng);
    psi::FlowMap<double> lin = [m](const Vector<double>& y) { return (m * y).eval(); };
    Matrix<double> j = psi::numerical_jacobian(lin, z, 1e-5);
    CHECK((j - m).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("check_poisson_map") {
  std::mt19937_64 rng(kSeed + 4);

  SUBCASE("identity map has zero residual") {
    auto r = rigid_body();
    auto z = random_state(rng, 3);
    psi::FlowMap<double> id = [](const Vector<double>& y) { return y; };
    CHECK(check_poisson_map(id, r, z, 1e-5) <= 1e-12);
  }

  SUBCASE("exact rotation preserves the canonical structure") {
    auto r = canonical2d();
    auto z = random_state(rng, 2);
    psi::FlowMap<double> rot = [](const Vector<double>& y) {
      Vector<double> out(2);
      const double c = std::cos(0.3), s = std::sin(0.3);
      out[0] = c * y[0] + s * y[1];
      out[1] = -s * y[0] + c * y[1];
      return out;
    };
    CHECK(check_poisson_map(rot, r, z, 1e-5) <= 1e-10);
  }

  SUBCASE("scaling is not a Poisson map") {
    auto r = canonical2d();
    auto z = random_state(rng, 2);
    psi::FlowMap<double> scale = [](const Vector<double>& y) { return (2.0 * y).eval(); };
    CHECK(check_poisson_map(scale, r, z, 1e-5) == doctest::Approx(3.0).epsilon(1e-6));
  }
}

TEST_CASE("dependency pattern checks") {
  // R = [[0, A], [-A^T, 0]] with a_11 = a_11(p_1, q_1), a_12 const.
  StructureMatrixField<double> r;
  r.dim = 4;
  r.evaluate = [](const Vector<double>& z) {
    Matrix<double> m = Matrix<double>::Zero(4, 4);
    m(0, 2) = z[0] * z[2];
    m(0, 3) = 1.0;
    m(1, 2) = 0.5;
    m(1, 3) = std::sin(z[3]);
    m(2, 0) = -m(0, 2);
    m(3, 0) = -m(0, 3);
    m(2, 1) = -m(1, 2);
    m(3, 1) = -m(1, 3);
    return m;
  };
  DependencyPattern pat(4);
  pat.set_entry(0, 2, {0, 2});
  pat.set_entry(1, 3, {3});
  r.pattern = pat;

  std::mt19937_64 rng(kSeed + 5);
  std::vector<Vector<double>> probes;
  for (int i = 0; i < 6; ++i) probes.push_back(random_state(rng, 4));

  CHECK(psi::pattern_supports_two_way_split(r, probes));
  CHECK_FALSE(psi::pattern_supports_coordinate_split(r, probes));  // a_11 depends on p_1
  CHECK(psi::dependency_pattern_violation(r, probes) <= 1e-12);

  SUBCASE("a lying mask is detected") {
    StructureMatrixField<double> lying = r;
    DependencyPattern loose(4);
    loose.set_entry(0, 2, {2});  // hides the p_1 dependence
    loose.set_entry(1, 3, {3});
    lying.pattern = loose;
    CHECK(psi::dependency_pattern_violation(lying, probes) > 1e-3);
  }
}
