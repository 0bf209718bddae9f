#pragma once

#include <Eigen/Core>

namespace sparsedyn {

/// Uniform periodic 1-D grid together with its FFT-ordered wavenumbers.
///
/// Nodes are x_i = x_min + i*dx for i = 0..n-1 with dx = (x_max - x_min)/n;
/// the right endpoint x_max is identified with x_min.  Wavenumbers follow
/// the standard FFT ordering k_m = 2*pi*m/(x_max - x_min) with
/// m in {0,...,n/2-1, -n/2,...,-1}.
class GridSpec {
 public:
  GridSpec(int n, double x_min, double x_max);

  int n() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& wavenumbers() const { return wavenumbers_; }

  /// Nearest grid node to a position inside [x_min, x_max); periodic, so a
  /// position within dx/2 of x_max rounds to node 0.
  int nearest_index(double x) const;

  bool operator==(const GridSpec& other) const {
    return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
  }
  bool operator!=(const GridSpec& other) const { return !(*this == other); }

 private:
  int n_;
  double x_min_;
  double x_max_;
  double dx_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd wavenumbers_;
};

}  // namespace sparsedyn
