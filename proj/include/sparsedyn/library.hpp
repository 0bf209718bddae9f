#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "sparsedyn/pod.hpp"

namespace sparsedyn {

/// Overcomplete modal library: horizontal concatenation of per-regime POD
/// bases.  Columns are orthonormal within a block but not across blocks.
/// Blocks are kept intact so the winning regime's basis can be reused for
/// Galerkin reconstruction.
class ModalLibrary {
 public:
  explicit ModalLibrary(std::vector<PodBasis> blocks);

  Eigen::Index n() const { return n_; }
  int p() const { return p_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<PodBasis>& blocks() const { return blocks_; }
  const PodBasis& block(int index) const { return blocks_.at(index); }
  const std::vector<int>& offsets() const { return offsets_; }

  /// Block holding the given regime id; throws OutOfRange if absent.
  const PodBasis& block_for_regime(int regime_id) const;
  int block_index_for_regime(int regime_id) const;

  /// Concatenated n x p matrix view.
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// Regime id owning a library column.  Throws OutOfRange.
  int block_of_column(int col) const;

  bool operator==(const ModalLibrary& other) const;

 private:
  std::vector<PodBasis> blocks_;
  std::vector<int> offsets_;
  Eigen::Index n_ = 0;
  int p_ = 0;
  Eigen::MatrixXcd matrix_;
};

/// Concatenate bases in the given order.  All bases must share the state
/// dimension (DimensionMismatch) and carry distinct regime ids
/// (DuplicateRegime).
ModalLibrary build_library(std::vector<PodBasis> bases);

/// Binary container: magic "PODL", version u16 = 1, u32 block_count,
/// u64 n, then per block u32 regime_id, u32 rank, rank f64 singular values,
/// rank f64 energy fractions, and n*rank complex values as interleaved
/// (real, imag) f64 pairs in column-major order.  All fields little-endian.
/// Round trips are bit-exact.
void save_library(const ModalLibrary& lib, const std::filesystem::path& path);
ModalLibrary load_library(const std::filesystem::path& path);

}  // namespace sparsedyn
