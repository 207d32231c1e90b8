#ifndef PSI_LOBATTO_HPP
#define PSI_LOBATTO_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "psi/poisson.hpp"
#include "psi/splitting.hpp"

namespace psi {

template <typename Scalar>
struct ButcherTableau {
  Matrix<Scalar> A;
  Vector<Scalar> b;
  Vector<Scalar> c;
  int classical_order = 0;
  std::string name;

  Index stages() const { return b.size(); }

  Scalar weight_defect() const { return std::abs(b.sum() - Scalar(1)); }

  Scalar row_sum_defect() const {
    return (A.rowwise().sum() - c).cwiseAbs().maxCoeff();
  }

  // max_k |sum_i b_i c_i^{k-1} - 1/k| over k = 1..classical_order (the B(p)
  // simplified order conditions).
  Scalar quadrature_defect() const {
    Scalar worst = 0;
    Vector<Scalar> cp = Vector<Scalar>::Ones(c.size());
    for (int k = 1; k <= classical_order; ++k) {
      worst = std::max(worst, std::abs(b.dot(cp) - Scalar(1) / Scalar(k)));
      cp = cp.cwiseProduct(c);
    }
    return worst;
  }
};

// 3-stage Lobatto IIIA, classical order 4.
template <typename Scalar = double>
ButcherTableau<Scalar> lobatto_order4() {
  ButcherTableau<Scalar> t;
  t.name = "4thloba";
  t.classical_order = 4;
  t.c.resize(3);
  t.c << 0, Scalar(0.5), 1;
  t.b.resize(3);
  t.b << Scalar(1) / 6, Scalar(2) / 3, Scalar(1) / 6;
  t.A.resize(3, 3);
  t.A << 0, 0, 0,
      Scalar(5) / 24, Scalar(1) / 3, Scalar(-1) / 24,
      Scalar(1) / 6, Scalar(2) / 3, Scalar(1) / 6;
  return t;
}

// 4-stage Lobatto IIIA, classical order 6.
template <typename Scalar = double>
ButcherTableau<Scalar> lobatto_order6() {
  const Scalar r5 = std::sqrt(Scalar(5));
  ButcherTableau<Scalar> t;
  t.name = "6thloba";
  t.classical_order = 6;
  t.c.resize(4);
  t.c << 0, (5 - r5) / 10, (5 + r5) / 10, 1;
  t.b.resize(4);
  t.b << Scalar(1) / 12, Scalar(5) / 12, Scalar(5) / 12, Scalar(1) / 12;
  t.A.resize(4, 4);
  t.A << 0, 0, 0, 0,
      (11 + r5) / 120, (25 - r5) / 120, (25 - 13 * r5) / 120, (-1 + r5) / 120,
      (11 - r5) / 120, (25 + 13 * r5) / 120, (25 + r5) / 120, (-1 - r5) / 120,
      Scalar(1) / 12, Scalar(5) / 12, Scalar(5) / 12, Scalar(1) / 12;
  return t;
}

template <typename Scalar>
struct ImplicitSolveSettings {
  Scalar tol = Scalar(1e-12);
  int max_iter = 50;
  enum class JacobianMode { finite_difference, frozen } jacobian_mode =
      JacobianMode::finite_difference;
  Scalar jacobian_fd_step = Scalar(1e-7);
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> fd_field_jacobian(const std::function<Vector<Scalar>(const Vector<Scalar>&)>& f,
                                 const Vector<Scalar>& y, Scalar step) {
  const Index m = y.size();
  Matrix<Scalar> j(m, m);
  Vector<Scalar> yp = y, ym = y;
  for (Index k = 0; k < m; ++k) {
    const Scalar h = step * (Scalar(1) + std::abs(y[k]));
    yp[k] = y[k] + h;
    ym[k] = y[k] - h;
    j.col(k) = (f(yp) - f(ym)) / (yp[k] - ym[k]);
    yp[k] = y[k];
    ym[k] = y[k];
  }
  return j;
}

}  // namespace detail

// One implicit Runge-Kutta step on a generic vector field.  The stacked stage
// equations are solved by Newton iteration (trivial predictor: all stages at
// z) until the stage residual is below settings.tol in max norm.
template <typename Scalar>
Vector<Scalar> rk_step_field(const ButcherTableau<Scalar>& tab,
                             const std::function<Vector<Scalar>(const Vector<Scalar>&)>& f,
                             const Vector<Scalar>& z, Scalar h,
                             const ImplicitSolveSettings<Scalar>& settings = {}) {
  const Index m = z.size();
  const Index s = tab.stages();
  if (h == Scalar(0)) return z;
  using Mode = typename ImplicitSolveSettings<Scalar>::JacobianMode;

  Vector<Scalar> stages(s * m);
  for (Index i = 0; i < s; ++i) stages.segment(i * m, m) = z;
  Matrix<Scalar> fvals(m, s);

  Matrix<Scalar> jac_frozen;
  if (settings.jacobian_mode == Mode::frozen)
    jac_frozen = detail::fd_field_jacobian(f, z, settings.jacobian_fd_step);

  Matrix<Scalar> newton(s * m, s * m);
  Vector<Scalar> residual(s * m);
  Eigen::PartialPivLU<Matrix<Scalar>> lu;
  bool factorized = false;

  Scalar res_norm = std::numeric_limits<Scalar>::infinity();
  for (int iter = 0; iter < settings.max_iter; ++iter) {
    for (Index i = 0; i < s; ++i) fvals.col(i) = f(stages.segment(i * m, m));
    require_finite(fvals, "rk_step: stage vector field");
    for (Index i = 0; i < s; ++i) {
      residual.segment(i * m, m) = stages.segment(i * m, m) - z;
      for (Index j = 0; j < s; ++j)
        residual.segment(i * m, m) -= h * tab.A(i, j) * fvals.col(j);
    }
    res_norm = residual.cwiseAbs().maxCoeff();
    if (res_norm <= settings.tol) return z + h * (fvals * tab.b);

    if (settings.jacobian_mode == Mode::finite_difference || !factorized) {
      newton.setIdentity();
      for (Index j = 0; j < s; ++j) {
        Matrix<Scalar> jf = settings.jacobian_mode == Mode::frozen
                                ? jac_frozen
                                : detail::fd_field_jacobian(f, Vector<Scalar>(stages.segment(j * m, m)),
                                                            settings.jacobian_fd_step);
        for (Index i = 0; i < s; ++i)
          newton.block(i * m, j * m, m, m) -= h * tab.A(i, j) * jf;
      }
      lu.compute(newton);
      factorized = true;
    }
    stages -= lu.solve(residual);
  }
  throw NonConvergence("rk_step: Newton did not reach tolerance", settings.max_iter,
                       static_cast<double>(res_norm));
}

template <typename Scalar>
Vector<Scalar> rk_step(const ButcherTableau<Scalar>& tab, const PoissonSystem<Scalar>& sys,
                       const Vector<Scalar>& z, Scalar h,
                       const ImplicitSolveSettings<Scalar>& settings = {}) {
  require_length(z, sys.dim, "rk_step");
  return rk_step_field<Scalar>(
      tab, [&sys](const Vector<Scalar>& y) { return eval_vector_field(sys, y); }, z, h, settings);
}

template <typename Scalar>
Integrator<Scalar> make_rk_integrator(ButcherTableau<Scalar> tab, PoissonSystem<Scalar> sys,
                                      ImplicitSolveSettings<Scalar> settings = {}) {
  const int order = tab.classical_order;
  std::string name = tab.name;
  return {[tab = std::move(tab), sys = std::move(sys), settings](Scalar h,
                                                                 const Vector<Scalar>& z) {
            return rk_step(tab, sys, z, h, settings);
          },
          order, std::move(name)};
}

}  // namespace psi

#endif
