#include "sparsedyn/pod.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

namespace {
constexpr double kSigmaClamp = 1e-12;
}

SnapshotEigen method_of_snapshots(const SnapshotMatrix& A) {
  const Eigen::Index q = A.q();
  if (q < 1) throw std::invalid_argument("method_of_snapshots: q must be >= 1");

  const Eigen::MatrixXcd corr = A.data.adjoint() * A.data;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(corr);
  if (solver.info() != Eigen::Success)
    throw EigenFailure("method_of_snapshots: eigensolver did not converge");

  // Eigen reports eigenvalues ascending; flip to descending.  For equal
  // eigenvalues the flip keeps the solver's ordering stable.
  SnapshotEigen out;
  out.W.resize(q, q);
  out.sigma.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const Eigen::Index src = q - 1 - i;
    out.W.col(i) = solver.eigenvectors().col(src);
    out.sigma[i] = std::sqrt(std::max(solver.eigenvalues()[src], 0.0));
  }
  const double clamp = kSigmaClamp * out.sigma[0];
  for (Eigen::Index i = 0; i < q; ++i) {
    if (out.sigma[i] < clamp) out.sigma[i] = 0.0;
  }
  return out;
}

int truncation_rank(const Eigen::VectorXd& sigma, double energy_threshold) {
  if (!(energy_threshold > 0.0) || energy_threshold > 1.0)
    throw std::invalid_argument("truncation_rank: threshold must be in (0, 1]");
  const double total = sigma.squaredNorm();
  if (total == 0.0)
    throw DegenerateData("truncation_rank: all singular values are zero");

  double cumulative = 0.0;
  for (Eigen::Index r = 0; r < sigma.size(); ++r) {
    cumulative += sigma[r] * sigma[r];
    if (cumulative / total >= energy_threshold) return static_cast<int>(r) + 1;
  }
  return static_cast<int>(sigma.size());
}

PodBasis pod_basis(const SnapshotMatrix& A, double energy_threshold) {
  SnapshotEigen eig = method_of_snapshots(A);
  if (eig.sigma[0] == 0.0)
    throw DegenerateData("pod_basis: snapshot matrix has no energy");

  int rank = truncation_rank(eig.sigma, energy_threshold);
  // Zero singular values carry no energy, so the threshold is always reached
  // within the nonzero ones.
  int nonzero = 0;
  while (nonzero < eig.sigma.size() && eig.sigma[nonzero] > 0.0) ++nonzero;
  rank = std::min(rank, nonzero);

  const double total_energy = eig.sigma.squaredNorm();

  PodBasis basis;
  basis.regime_id = A.regime_id;
  basis.modes.resize(A.n(), rank);
  basis.singular_values.resize(rank);
  basis.energy_fractions.resize(rank);

  for (int i = 0; i < rank; ++i) {
    Eigen::VectorXcd mode = A.data * eig.W.col(i) / eig.sigma[i];

    // Unit phase is arbitrary; pin it by the largest-magnitude entry.
    Eigen::Index peak = 0;
    mode.cwiseAbs().maxCoeff(&peak);
    const double peak_abs = std::abs(mode[peak]);
    if (peak_abs > 0.0) mode *= std::conj(mode[peak]) / peak_abs;

    basis.modes.col(i) = mode;
    basis.singular_values[i] = eig.sigma[i];
    basis.energy_fractions[i] = eig.sigma[i] * eig.sigma[i] / total_energy;
  }
  return basis;
}

}  // namespace sparsedyn
