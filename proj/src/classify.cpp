#include "sparsedyn/classify.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

Classification classify(const ModalLibrary& lib, const SparseSolution& sol,
                        ScoreRule rule) {
  if (sol.coeffs.size() != lib.p())
    throw std::invalid_argument("classify: coefficient count != library p");

  const int blocks = lib.block_count();
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(blocks);
  for (int j = 0; j < blocks; ++j) {
    const int offset = lib.offsets()[j];
    const int rank = lib.block(j).rank();
    const auto segment = sol.coeffs.segment(offset, rank);
    scores[j] = (rule == ScoreRule::block_l1) ? segment.cwiseAbs().sum()
                                              : segment.norm();
  }

  if (scores.maxCoeff() == 0.0)
    throw AllZero("classify: every coefficient is zero");

  int best = 0;
  for (int j = 1; j < blocks; ++j) {
    if (scores[j] > scores[best]) best = j;  // ties keep the lowest index
  }
  double runner_up = 0.0;
  for (int j = 0; j < blocks; ++j) {
    if (j != best) runner_up = std::max(runner_up, scores[j]);
  }

  Classification result;
  result.regime_id = lib.block(best).regime_id;
  result.block_scores = std::move(scores);
  result.margin = result.block_scores[best] - runner_up;
  result.solution = sol;
  return result;
}

BlockProjection project_onto_block(const ModalLibrary& lib,
                                   const SensorSet& sensors,
                                   const Measurement& y, int regime_id) {
  const PodBasis& block = lib.block_for_regime(regime_id);
  if (y.values.size() != sensors.m())
    throw std::invalid_argument("project_onto_block: measurement length");

  Eigen::MatrixXcd sampled(sensors.m(), block.rank());
  for (int i = 0; i < sensors.m(); ++i)
    sampled.row(i) = block.modes.row(sensors.indices[i]);

  BlockProjection projection;
  projection.underdetermined = sensors.m() < block.rank();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      sampled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  projection.amplitudes = Eigen::VectorXcd::Zero(block.rank());
  if (s.size() == 0 || s[0] == 0.0) return projection;
  const double cutoff = 1e-10 * s[0];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff)
      projection.amplitudes +=
          svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y.values) / s[i]);
  }
  return projection;
}

}  // namespace sparsedyn
