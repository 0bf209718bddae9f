#include "sparsedyn/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sparsedyn {

GridSpec::GridSpec(int n, double x_min, double x_max)
    : n_(n), x_min_(x_min), x_max_(x_max) {
  if (n <= 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("GridSpec: n must be a positive power of two");
  if (!(x_max > x_min))
    throw std::invalid_argument("GridSpec: x_max must exceed x_min");

  dx_ = (x_max_ - x_min_) / n_;
  nodes_.resize(n_);
  for (int i = 0; i < n_; ++i) nodes_[i] = x_min_ + i * dx_;

  const double k0 = 2.0 * std::numbers::pi / (x_max_ - x_min_);
  wavenumbers_.resize(n_);
  for (int m = 0; m < n_ / 2; ++m) wavenumbers_[m] = k0 * m;
  for (int m = n_ / 2; m < n_; ++m) wavenumbers_[m] = k0 * (m - n_);
}

int GridSpec::nearest_index(double x) const {
  if (x < x_min_ || x >= x_max_)
    throw std::invalid_argument("GridSpec: position outside [x_min, x_max)");
  const long idx = std::lround((x - x_min_) / dx_);
  return static_cast<int>(idx % n_);
}

}  // namespace sparsedyn
