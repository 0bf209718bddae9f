#pragma once

#include <Eigen/Core>

#include "sparsedyn/snapshot.hpp"

namespace sparsedyn {

/// Eigen-decomposition of the q x q snapshot correlation matrix A^H A:
/// W holds the eigenvectors, sigma the singular values of A (descending).
struct SnapshotEigen {
  Eigen::MatrixXcd W;     // q x q
  Eigen::VectorXd sigma;  // q, descending, clamped below 1e-12 * max to 0
};

/// Truncated orthonormal POD modes for one regime.
struct PodBasis {
  Eigen::MatrixXcd modes;           // n x r, orthonormal columns
  Eigen::VectorXd singular_values;  // r, descending
  Eigen::VectorXd energy_fractions; // r, sigma_i^2 / sum sigma^2
  int regime_id = 0;

  int rank() const { return static_cast<int>(modes.cols()); }
  Eigen::Index n() const { return modes.rows(); }
};

/// Method of snapshots: solve the q x q Hermitian eigenproblem
/// A^H A W = W Sigma_q^2 instead of decomposing the n x n correlation
/// matrix.  Throws EigenFailure if the eigensolver does not converge.
SnapshotEigen method_of_snapshots(const SnapshotMatrix& A);

/// Smallest r whose leading singular values capture at least
/// energy_threshold of the total variance sum(sigma^2).
/// Throws DegenerateData when all sigma are zero.
int truncation_rank(const Eigen::VectorXd& sigma, double energy_threshold);

/// Full POD pipeline: modes Psi = A W Sigma^-1 over nonzero singular values,
/// truncated at the energy threshold.  Each mode is phase-rotated so its
/// largest-magnitude entry is real and positive, making the basis
/// reproducible across eigensolvers.
PodBasis pod_basis(const SnapshotMatrix& A, double energy_threshold);

}  // namespace sparsedyn
