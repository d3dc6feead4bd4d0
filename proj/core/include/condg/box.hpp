#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace condg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an internal numerical routine cannot produce a trustworthy
/// answer (LP pivoting stalled, encoding residual too large, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box {x : lower <= x <= upper}.
class BoxBounds {
 public:
  BoxBounds() = default;
  BoxBounds(Vector lower, Vector upper);

  /// Box [lo, hi]^n.
  static BoxBounds uniform(int n, double lo, double hi);

  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  int dim() const noexcept { return static_cast<int>(lower_.size()); }

  /// Euclidean diameter ||upper - lower||.
  double diameter() const { return (upper_ - lower_).norm(); }

  bool contains(const Vector& x, double slack = 0.0) const;

  /// Largest bound violation of x (0 if inside).
  double violation(const Vector& x) const;

  Vector project(const Vector& x) const;

  /// Affine map from the unit cube: lower + u .* (upper - lower).
  Vector from_unit(const Vector& u) const;

 private:
  Vector lower_;
  Vector upper_;
};

}  // namespace condg
