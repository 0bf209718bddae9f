#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

namespace sparsedyn {

enum class SolverId { l1, omp, least_squares };

std::string to_string(SolverId id);

/// Coefficient vector over library columns with solver diagnostics.
struct SparseSolution {
  Eigen::VectorXcd coeffs;
  double residual_norm = 0.0;  // ||G a - y||_2
  int iterations = 0;
  SolverId solver_id = SolverId::l1;
  double lambda = 0.0;   // regularization used; 0 for OMP / least squares
  bool converged = true; // false flags NoConvergence, never thrown
};

/// Proximal operator of t*|.| for complex scalars:
/// z * max(1 - t/|z|, 0), with 0 mapped to 0.  Preserves phase.
std::complex<double> soft_threshold_complex(std::complex<double> z, double t);

/// Basis pursuit denoising min_a lambda*||a||_1 + 0.5*||G a - y||_2^2 by
/// monotone FISTA with complex soft thresholding.  Columns of G are scaled
/// to unit norm internally and coefficients un-scaled on exit, so lambda has
/// a uniform meaning across library blocks; the step size is 1/L with L the
/// spectral norm of the normalized Gram matrix, estimated by power
/// iteration.  Stops when the relative objective change drops below tol or
/// after max_iter iterations (converged = false only if the final change
/// still exceeds 100*tol).
SparseSolution solve_l1(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                        double lambda, double tol = 1e-8, int max_iter = 5000,
                        const Eigen::VectorXcd* warm_start = nullptr);

/// Homotopy approximation of equality-constrained basis pursuit: solve_l1
/// over a ladder of penalties lambda_0 = 0.1*||G^H y||_inf halved each stage
/// down to 1e-4*||G^H y||_inf, warm-starting each stage from the previous
/// solution.  Iteration count accumulates across stages.
SparseSolution solve_l1_continuation(const Eigen::MatrixXcd& G,
                                     const Eigen::VectorXcd& y,
                                     double tol = 1e-8, int max_iter = 5000);

/// Orthogonal matching pursuit: greedily pick the column most correlated
/// with the residual and least-squares refit on the active set, until k_max
/// atoms are selected or the residual norm drops below tol.
SparseSolution solve_omp(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                         int k_max, double tol);

/// Minimum-norm least squares via SVD pseudo-inverse with relative singular
/// value cutoff 1e-10.
SparseSolution solve_least_squares(const Eigen::MatrixXcd& G,
                                   const Eigen::VectorXcd& y);

}  // namespace sparsedyn
