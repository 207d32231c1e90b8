#ifndef PSI_TYPES_HPP
#define PSI_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "psi/errors.hpp"

namespace psi {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& z, const char* where) {
  if (!z.allFinite()) throw NonFiniteValue(std::string(where) + ": non-finite component");
}

template <typename Derived>
void require_length(const Eigen::MatrixBase<Derived>& z, Index m, const char* where) {
  if (z.size() != m)
    throw DimensionMismatch(std::string(where) + ": expected length " + std::to_string(m) +
                            ", got " + std::to_string(z.size()));
}

// Which state variables each entry r_ij(Z) may depend on, as a bitmask per entry.
// Entry (j,i) always mirrors (i,j): r_ji = -r_ij.
class DependencyPattern {
 public:
  DependencyPattern() = default;
  explicit DependencyPattern(Index m) : mask_(m, m) { mask_.setZero(); }

  static std::uint32_t bits(std::initializer_list<Index> vars) {
    std::uint32_t b = 0;
    for (Index v : vars) b |= (std::uint32_t{1} << v);
    return b;
  }

  // All entries may depend on everything (the uninformative default).
  static DependencyPattern dense(Index m) {
    DependencyPattern p(m);
    p.mask_.setConstant((std::uint32_t{1} << m) - 1);
    return p;
  }

  void set_entry(Index i, Index j, std::initializer_list<Index> vars) {
    mask_(i, j) = bits(vars);
    mask_(j, i) = mask_(i, j);
  }

  std::uint32_t entry(Index i, Index j) const { return mask_(i, j); }

  // True if entry (i,j) depends on no variables outside `allowed`.
  bool entry_within(Index i, Index j, std::uint32_t allowed) const {
    return (mask_(i, j) & ~allowed) == 0;
  }

  Index dim() const { return mask_.rows(); }
  bool empty() const { return mask_.size() == 0; }

 private:
  Eigen::Matrix<std::uint32_t, Eigen::Dynamic, Eigen::Dynamic> mask_;
};

}  // namespace psi

#endif
