#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "sparsedyn/grid.hpp"

namespace sparsedyn {

/// Coefficients beta = (tau, kappa, mu, nu, eps, gamma) of the cubic-quintic
/// Ginzburg-Landau equation with fourth-order diffusion,
///
///   i U_t + (1/2 - i tau) U_xx - i kappa U_xxxx
///         + (1 - i mu) |U|^2 U + (nu - i eps) |U|^4 U - i gamma U = 0.
struct CqgleParams {
  double tau = 0.0;
  double kappa = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double eps = 0.0;
  double gamma = 0.0;

  bool all_finite() const;
  bool operator==(const CqgleParams&) const = default;
};

/// Complex scalar field sampled on a periodic grid at one time instant.
struct FieldState {
  GridSpec grid;
  Eigen::VectorXcd values;
  double time = 0.0;

  bool consistent() const { return values.size() == grid.n(); }
};

/// One piece of a piecewise-constant bifurcation schedule.
struct ScheduleSegment {
  double t_start = 0.0;
  int regime_id = 0;
  CqgleParams params;
};

/// Piecewise-constant parameter schedule beta(t).  Segment j is active on
/// [t_start_j, t_start_{j+1}); the last segment extends to the end of the
/// integration.
struct BetaSchedule {
  std::vector<ScheduleSegment> segments;

  /// Throws std::invalid_argument unless start times are strictly
  /// increasing and the first one is 0.
  void validate() const;

  /// Index of the segment active at time t (t >= 0).
  int segment_at(double t) const;
};

/// Fourier multiplier c(k) of the linear part of U_t: applying the linear
/// operator to e^{ikx} gives c(k) e^{ikx} with
///   c(k) = -tau k^2 - (i/2) k^2 + kappa k^4 + gamma.
std::complex<double> linear_symbol(const CqgleParams& params, double k);

/// Pointwise nonlinearity N(U) = i [ (1 - i mu)|U|^2 U + (nu - i eps)|U|^4 U ]
/// entering U_t = L U + N(U).
Eigen::VectorXcd nonlinear_term(const Eigen::VectorXcd& values,
                                const CqgleParams& params);

/// Localized initial profile U(x, 0) = amplitude * sech(x / width).
FieldState initial_condition(const GridSpec& grid, double amplitude,
                             double width);

}  // namespace sparsedyn
