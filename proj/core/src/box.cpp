#include "condg/box.hpp"

#include <cmath>

namespace condg {

BoxBounds::BoxBounds(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw std::invalid_argument("BoxBounds: lower/upper must be nonempty and of equal size");
  }
  for (Eigen::Index j = 0; j < lower_.size(); ++j) {
    if (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j]) || lower_[j] > upper_[j]) {
      throw std::invalid_argument("BoxBounds: need finite lower <= upper in every coordinate");
    }
  }
  if (!(diameter() > 0.0)) {
    throw std::invalid_argument("BoxBounds: degenerate box (zero diameter)");
  }
}

BoxBounds BoxBounds::uniform(int n, double lo, double hi) {
  return BoxBounds(Vector::Constant(n, lo), Vector::Constant(n, hi));
}

bool BoxBounds::contains(const Vector& x, double slack) const {
  return x.size() == lower_.size() && violation(x) <= slack;
}

double BoxBounds::violation(const Vector& x) const {
  double v = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    v = std::max({v, lower_[j] - x[j], x[j] - upper_[j]});
  }
  return v;
}

Vector BoxBounds::project(const Vector& x) const {
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

Vector BoxBounds::from_unit(const Vector& u) const {
  return lower_ + u.cwiseProduct(upper_ - lower_);
}

}  // namespace condg
