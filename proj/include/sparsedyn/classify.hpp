#pragma once

#include <Eigen/Core>

#include "sparsedyn/library.hpp"
#include "sparsedyn/sensing.hpp"
#include "sparsedyn/sparse.hpp"

namespace sparsedyn {

/// Per-block scoring of a sparse coefficient vector.  block_l1 sums
/// coefficient moduli within each block (matching the sparsity-promoting
/// objective); block_l2 takes the block Euclidean norm.
enum class ScoreRule { block_l1, block_l2 };

struct Classification {
  int regime_id = 0;
  Eigen::VectorXd block_scores;  // one per library block, in block order
  double margin = 0.0;           // top score minus runner-up
  SparseSolution solution;
};

/// Decide the active regime from a sparse solution over the library.
/// Ties go to the lowest block index.  Throws AllZero when every
/// coefficient is zero.
Classification classify(const ModalLibrary& lib, const SparseSolution& sol,
                        ScoreRule rule = ScoreRule::block_l1);

struct BlockProjection {
  Eigen::VectorXcd amplitudes;   // r_j modal amplitudes
  bool underdetermined = false;  // m < r_j: minimum-norm solution returned
};

/// Project a measurement onto one regime's modes through the pseudo-inverse
/// of Phi * Psi_j (SVD cutoff 1e-10 relative), giving initial modal
/// amplitudes for the Galerkin model.
BlockProjection project_onto_block(const ModalLibrary& lib,
                                   const SensorSet& sensors,
                                   const Measurement& y, int regime_id);

}  // namespace sparsedyn
