#pragma once

#include <vector>

#include <Eigen/Core>

namespace sparsedyn {

/// Column-wise collection of field snapshots for one parameter regime:
/// column j holds U(x, times[j]).
struct SnapshotMatrix {
  Eigen::MatrixXcd data;      // n x q
  std::vector<double> times;  // length q
  int regime_id = 0;

  Eigen::Index n() const { return data.rows(); }
  Eigen::Index q() const { return data.cols(); }
};

}  // namespace sparsedyn
