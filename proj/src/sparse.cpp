#include "sparsedyn/sparse.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sparsedyn {

namespace {

constexpr double kPinvCutoff = 1e-10;

double spectral_norm_sq(const Eigen::MatrixXcd& G) {
  // Power iteration on G^H G from a fixed, slightly skewed start so the
  // estimate is deterministic.  The 5% margin keeps 1/L a valid step even
  // if the iteration has not fully converged.
  const Eigen::Index p = G.cols();
  Eigen::VectorXcd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v[i] = 1.0 + 1e-3 * double(i);
  v /= v.norm();

  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXcd w = G.adjoint() * (G * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(norm - lambda) <= 1e-12 * norm) {
      lambda = norm;
      break;
    }
    lambda = norm;
  }
  return lambda * 1.05;
}

// Objective in the normalized variable u = D a (D = column norms):
// lambda * sum_j |u_j| / d_j + 0.5 * ||Gn u - y||^2, identical to
// lambda*||a||_1 + 0.5*||G a - y||^2 on the original system.
double bpdn_objective(const Eigen::MatrixXcd& Gn, const Eigen::VectorXcd& y,
                      const Eigen::VectorXcd& u, const Eigen::VectorXd& inv_d,
                      double lambda) {
  double penalty = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j)
    penalty += std::abs(u[j]) * inv_d[j];
  return lambda * penalty + 0.5 * (Gn * u - y).squaredNorm();
}

Eigen::VectorXcd shrink_weighted(const Eigen::VectorXcd& v, double t,
                                 const Eigen::VectorXd& inv_d) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = soft_threshold_complex(v[i], t * inv_d[i]);
  return out;
}

// SVD pseudo-inverse application with relative cutoff.
Eigen::VectorXcd pinv_apply(const Eigen::MatrixXcd& G,
                            const Eigen::VectorXcd& y) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(G.cols());
  if (s.size() == 0 || s[0] == 0.0) return a;
  const double cutoff = kPinvCutoff * s[0];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff)
      a += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(y) / s[i]);
  }
  return a;
}

}  // namespace

std::string to_string(SolverId id) {
  switch (id) {
    case SolverId::l1: return "l1";
    case SolverId::omp: return "omp";
    case SolverId::least_squares: return "ls";
  }
  return "?";
}

std::complex<double> soft_threshold_complex(std::complex<double> z, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("soft_threshold_complex: t must be >= 0");
  const double mag = std::abs(z);
  if (mag == 0.0) return {0.0, 0.0};
  const double scale = std::max(1.0 - t / mag, 0.0);
  return z * scale;
}

SparseSolution solve_l1(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                        double lambda, double tol, int max_iter,
                        const Eigen::VectorXcd* warm_start) {
  const Eigen::Index m = G.rows();
  const Eigen::Index p = G.cols();
  if (m > p)
    throw std::invalid_argument("solve_l1: expects an underdetermined or "
                                "square system (m <= p)");
  if (!(lambda > 0.0)) throw std::invalid_argument("solve_l1: lambda must be > 0");
  if (G.norm() == 0.0) throw std::invalid_argument("solve_l1: G is zero");

  // Iterate on the column-normalized system (a pure change of variables
  // that conditions the Gram matrix); the penalty stays on the original
  // coefficients through per-column thresholds.
  Eigen::VectorXd col_norms(p);
  Eigen::VectorXd inv_d(p);
  Eigen::MatrixXcd Gn(m, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double nj = G.col(j).norm();
    col_norms[j] = nj;
    inv_d[j] = (nj > 0.0) ? 1.0 / nj : 0.0;
    Gn.col(j) = (nj > 0.0) ? (G.col(j) / nj).eval() : G.col(j);
  }

  const double lip = std::max(spectral_norm_sq(Gn),
                              std::numeric_limits<double>::min());
  const double step = 1.0 / lip;

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(p);
  if (warm_start) {
    if (warm_start->size() != p)
      throw std::invalid_argument("solve_l1: warm start size mismatch");
    x = warm_start->cwiseProduct(col_norms.cast<std::complex<double>>());
  }
  Eigen::VectorXcd momentum = x;
  double t_accel = 1.0;
  double objective = bpdn_objective(Gn, y, x, inv_d, lambda);
  double rel_change = std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Eigen::VectorXcd grad = Gn.adjoint() * (Gn * momentum - y);
    Eigen::VectorXcd candidate =
        shrink_weighted(momentum - step * grad, lambda * step, inv_d);
    double cand_objective = bpdn_objective(Gn, y, candidate, inv_d, lambda);

    if (cand_objective > objective) {
      // Momentum overshoot: restart from a plain proximal-gradient step,
      // which cannot increase the objective.
      grad = Gn.adjoint() * (Gn * x - y);
      candidate = shrink_weighted(x - step * grad, lambda * step, inv_d);
      cand_objective = bpdn_objective(Gn, y, candidate, inv_d, lambda);
      t_accel = 1.0;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
    momentum = candidate + ((t_accel - 1.0) / t_next) * (candidate - x);
    t_accel = t_next;

    rel_change = std::abs(objective - cand_objective) /
                 std::max(objective, std::numeric_limits<double>::min());
    x = std::move(candidate);
    objective = cand_objective;
    if (rel_change < tol) {
      ++iter;
      break;
    }
  }

  SparseSolution sol;
  sol.solver_id = SolverId::l1;
  sol.lambda = lambda;
  sol.iterations = iter;
  sol.converged = rel_change <= 100.0 * tol;
  sol.coeffs.resize(p);
  for (Eigen::Index j = 0; j < p; ++j)
    sol.coeffs[j] = (col_norms[j] > 0.0) ? x[j] / col_norms[j]
                                         : std::complex<double>{0.0, 0.0};
  sol.residual_norm = (G * sol.coeffs - y).norm();
  return sol;
}

SparseSolution solve_l1_continuation(const Eigen::MatrixXcd& G,
                                     const Eigen::VectorXcd& y,
                                     double tol, int max_iter) {
  // Above ||G^H y||_inf the BPDN solution is identically zero, so the
  // ladder starts a decade below and stops four decades down.
  const double corr_max = (G.adjoint() * y).cwiseAbs().maxCoeff();
  if (corr_max == 0.0) {
    SparseSolution sol;
    sol.solver_id = SolverId::l1;
    sol.coeffs = Eigen::VectorXcd::Zero(G.cols());
    sol.residual_norm = y.norm();
    return sol;
  }

  const double lambda_floor = 1e-4 * corr_max;
  double lambda = 0.1 * corr_max;
  SparseSolution sol;
  Eigen::VectorXcd warm = Eigen::VectorXcd::Zero(G.cols());
  int total_iterations = 0;
  bool converged = true;
  while (true) {
    sol = solve_l1(G, y, lambda, tol, max_iter, &warm);
    total_iterations += sol.iterations;
    converged = converged && sol.converged;
    warm = sol.coeffs;
    if (lambda <= lambda_floor) break;
    lambda = std::max(0.5 * lambda, lambda_floor);
  }
  sol.iterations = total_iterations;
  sol.converged = converged;
  return sol;
}

SparseSolution solve_omp(const Eigen::MatrixXcd& G, const Eigen::VectorXcd& y,
                         int k_max, double tol) {
  const Eigen::Index m = G.rows();
  const Eigen::Index p = G.cols();
  if (k_max < 1 || k_max > std::min(m, p))
    throw std::invalid_argument("solve_omp: k_max must be in [1, min(m, p)]");

  Eigen::VectorXd col_norms(p);
  for (Eigen::Index j = 0; j < p; ++j) col_norms[j] = G.col(j).norm();

  std::vector<Eigen::Index> support;
  Eigen::VectorXcd residual = y;
  Eigen::VectorXcd active_coeffs;

  int iter = 0;
  while (static_cast<int>(support.size()) < k_max && residual.norm() > tol) {
    // Most correlated unselected column, normalized so column scaling does
    // not bias the selection.
    Eigen::Index best = -1;
    double best_corr = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_norms[j] == 0.0) continue;
      if (std::find(support.begin(), support.end(), j) != support.end())
        continue;
      const double corr = std::abs(G.col(j).dot(residual)) / col_norms[j];
      if (corr > best_corr) {
        best_corr = corr;
        best = j;
      }
    }
    if (best < 0 || best_corr <= 1e-14 * std::max(1.0, y.norm())) break;

    support.push_back(best);
    Eigen::MatrixXcd active(m, support.size());
    for (std::size_t c = 0; c < support.size(); ++c)
      active.col(c) = G.col(support[c]);
    active_coeffs = pinv_apply(active, y);
    residual = y - active * active_coeffs;
    ++iter;
  }

  SparseSolution sol;
  sol.solver_id = SolverId::omp;
  sol.iterations = iter;
  sol.coeffs = Eigen::VectorXcd::Zero(p);
  for (std::size_t c = 0; c < support.size(); ++c)
    sol.coeffs[support[c]] = active_coeffs[c];
  sol.residual_norm = residual.norm();
  return sol;
}

SparseSolution solve_least_squares(const Eigen::MatrixXcd& G,
                                   const Eigen::VectorXcd& y) {
  if (G.norm() == 0.0)
    throw std::invalid_argument("solve_least_squares: G is zero");
  SparseSolution sol;
  sol.solver_id = SolverId::least_squares;
  sol.coeffs = pinv_apply(G, y);
  sol.residual_norm = (G * sol.coeffs - y).norm();
  sol.iterations = 0;
  return sol;
}

}  // namespace sparsedyn
