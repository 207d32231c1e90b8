#ifndef PSI_VERIFY_HPP
#define PSI_VERIFY_HPP

#include <functional>
#include <vector>

#include "psi/fields.hpp"

namespace psi {

template <typename Scalar>
using FlowMap = std::function<Vector<Scalar>(const Vector<Scalar>&)>;

template <typename Derived>
typename Derived::Scalar skew_residual(const Eigen::MatrixBase<Derived>& r) {
  return (r + r.transpose()).cwiseAbs().maxCoeff();
}

// max |r_ij + r_ji|; the caller compares against its tolerance.
template <typename Scalar>
Scalar check_skew_symmetry(const StructureMatrixField<Scalar>& r, const Vector<Scalar>& z) {
  return skew_residual(r(z));
}

// Max over (i,j,k) of the cyclic compatibility sum
//   sum_l d(r_ij)/dz_l r_lk + d(r_jk)/dz_l r_li + d(r_ki)/dz_l r_lj,
// with entry derivatives taken by central differences of step fd_step.
// Evaluates all m^3 triples; the systems here have m <= 8.
template <typename Scalar>
Scalar check_jacobi_identity(const StructureMatrixField<Scalar>& r, const Vector<Scalar>& z,
                             Scalar fd_step) {
  const Index m = r.dim;
  require_length(z, m, "check_jacobi_identity");
  Matrix<Scalar> r0 = r(z);
  require_finite(r0, "check_jacobi_identity: R(z)");

  std::vector<Matrix<Scalar>> dr(static_cast<std::size_t>(m));
  Vector<Scalar> zp = z, zm = z;
  for (Index l = 0; l < m; ++l) {
    const Scalar h = fd_step * (Scalar(1) + std::abs(z[l]));
    zp[l] = z[l] + h;
    zm[l] = z[l] - h;
    dr[static_cast<std::size_t>(l)] = (r(zp) - r(zm)) / (zp[l] - zm[l]);
    require_finite(dr[static_cast<std::size_t>(l)], "check_jacobi_identity: dR");
    zp[l] = z[l];
    zm[l] = z[l];
  }

  Scalar worst = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      for (Index k = 0; k < m; ++k) {
        Scalar s = 0;
        for (Index l = 0; l < m; ++l) {
          const auto& d = dr[static_cast<std::size_t>(l)];
          s += d(i, j) * r0(l, k) + d(j, k) * r0(l, i) + d(k, i) * r0(l, j);
        }
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// Central-difference Jacobian of a flow map, column j = (map(z+h e_j) - map(z-h e_j)) / 2h.
template <typename Scalar>
Matrix<Scalar> numerical_jacobian(const FlowMap<Scalar>& map, const Vector<Scalar>& z,
                                  Scalar fd_step) {
  const Index m = z.size();
  Matrix<Scalar> jac(m, m);
  Vector<Scalar> zp = z, zm = z;
  for (Index j = 0; j < m; ++j) {
    const Scalar h = fd_step * (Scalar(1) + std::abs(z[j]));
    zp[j] = z[j] + h;
    zm[j] = z[j] - h;
    // Divide by the realized spread, not 2h, so representation rounding in
    // z +- h does not pollute the difference quotient.
    jac.col(j) = (map(zp) - map(zm)) / (zp[j] - zm[j]);
    zp[j] = z[j];
    zm[j] = z[j];
  }
  require_finite(jac, "numerical_jacobian");
  return jac;
}

// || J R(z) J^T - R(map(z)) ||_max with J the central-difference Jacobian:
// the push-forward identity {F o map, G o map} = {F, G} o map in matrix form.
// Zero (up to finite-difference error) exactly when the map preserves the
// Poisson structure at z.  Note the orientation: J multiplies R(z) from the
// left; the transposed variant J^T R(map(z)) J = R(z) is a different
// condition that fails for flows of state-dependent structures (the two
// coincide only when R is constant along the map, e.g. canonical J).
template <typename Scalar>
Scalar check_poisson_map(const FlowMap<Scalar>& map, const StructureMatrixField<Scalar>& r,
                         const Vector<Scalar>& z, Scalar fd_step) {
  Matrix<Scalar> jac = numerical_jacobian(map, z, fd_step);
  Matrix<Scalar> lhs = jac * r(z) * jac.transpose();
  return (lhs - r(map(z))).cwiseAbs().maxCoeff();
}

namespace detail {

// Numeric check that a block of R vanishes identically at the probe points.
template <typename Scalar>
bool block_is_zero(const StructureMatrixField<Scalar>& r,
                   const std::vector<Vector<Scalar>>& probes, Index row0, Index col0, Index rows,
                   Index cols, Scalar tol) {
  for (const auto& z : probes) {
    Matrix<Scalar> m = r(z);
    if (m.block(row0, col0, rows, cols).cwiseAbs().maxCoeff() > tol * (Scalar(1) + m.cwiseAbs().maxCoeff()))
      return false;
  }
  return true;
}

}  // namespace detail

// R = [[0, A], [-A^T, 0]] with a_ij a function of (p_i, q_j) only.
// Certifies that a two-piece split H = H1(p) + H2(q) has exactly solvable pieces.
template <typename Scalar>
bool pattern_supports_two_way_split(const StructureMatrixField<Scalar>& r,
                                    const std::vector<Vector<Scalar>>& probes,
                                    Scalar tol = Scalar(1e-12)) {
  const Index m = r.dim;
  if (m % 2 != 0 || r.pattern.empty()) return false;
  const Index n = m / 2;
  if (!detail::block_is_zero(r, probes, 0, 0, n, n, tol)) return false;
  if (!detail::block_is_zero(r, probes, n, n, n, n, tol)) return false;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (!r.pattern.entry_within(i, n + j, DependencyPattern::bits({i, n + j}))) return false;
  return true;
}

// R = [[0, A], [-A^T, C]] with a_ij a function of q_j only and c_ij a function
// of (p_1..p_n, q_j).  Certifies solvability of the (n+1)-piece split
// H = H1(p) + H2(q_1) + ... + H_{n+1}(q_n).
template <typename Scalar>
bool pattern_supports_coordinate_split(const StructureMatrixField<Scalar>& r,
                                       const std::vector<Vector<Scalar>>& probes,
                                       Scalar tol = Scalar(1e-12)) {
  const Index m = r.dim;
  if (m % 2 != 0 || r.pattern.empty()) return false;
  const Index n = m / 2;
  if (!detail::block_is_zero(r, probes, 0, 0, n, n, tol)) return false;
  std::uint32_t pbits = 0;
  for (Index i = 0; i < n; ++i) pbits |= DependencyPattern::bits({i});
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!r.pattern.entry_within(i, n + j, DependencyPattern::bits({n + j}))) return false;
      if (!r.pattern.entry_within(n + i, n + j, pbits | DependencyPattern::bits({n + j})))
        return false;
    }
  return true;
}

// Every entry r_ij a function of (z_i, z_j) only.  Certifies solvability of the
// fully separable split H = H1(z_1) + ... + Hm(z_m).
template <typename Scalar>
bool pattern_supports_full_split(const StructureMatrixField<Scalar>& r) {
  const Index m = r.dim;
  if (r.pattern.empty()) return false;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (!r.pattern.entry_within(i, j, DependencyPattern::bits({i, j}))) return false;
  return true;
}

// Spot-check a registered dependency pattern: perturbing variable l must not
// move any entry whose mask excludes l.  Returns the largest illegal entry
// derivative (difference quotient).
template <typename Scalar>
Scalar dependency_pattern_violation(const StructureMatrixField<Scalar>& r,
                                    const std::vector<Vector<Scalar>>& probes,
                                    Scalar step = Scalar(1e-4)) {
  Scalar worst = 0;
  for (const auto& z : probes) {
    Vector<Scalar> zp = z, zm = z;
    for (Index l = 0; l < r.dim; ++l) {
      const Scalar h = step * (Scalar(1) + std::abs(z[l]));
      zp[l] = z[l] + h;
      zm[l] = z[l] - h;
      Matrix<Scalar> diff = (r(zp) - r(zm)) / (zp[l] - zm[l]);
      for (Index i = 0; i < r.dim; ++i)
        for (Index j = 0; j < r.dim; ++j)
          if ((r.pattern.entry(i, j) & (std::uint32_t{1} << l)) == 0)
            worst = std::max(worst, std::abs(diff(i, j)));
      zp[l] = z[l];
      zm[l] = z[l];
    }
  }
  return worst;
}

}  // namespace psi

#endif
