#include "sparsedyn/cqgle.hpp"

#include <cmath>
#include <stdexcept>

namespace sparsedyn {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
}

bool CqgleParams::all_finite() const {
  return std::isfinite(tau) && std::isfinite(kappa) && std::isfinite(mu) &&
         std::isfinite(nu) && std::isfinite(eps) && std::isfinite(gamma);
}

void BetaSchedule::validate() const {
  if (segments.empty())
    throw std::invalid_argument("BetaSchedule: no segments");
  if (segments.front().t_start != 0.0)
    throw std::invalid_argument("BetaSchedule: first segment must start at 0");
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (!(segments[i].t_start > segments[i - 1].t_start))
      throw std::invalid_argument(
          "BetaSchedule: start times must be strictly increasing");
  }
}

int BetaSchedule::segment_at(double t) const {
  int idx = 0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (t >= segments[i].t_start) idx = static_cast<int>(i);
  }
  return idx;
}

std::complex<double> linear_symbol(const CqgleParams& params, double k) {
  const double k2 = k * k;
  return {-params.tau * k2 + params.kappa * k2 * k2 + params.gamma,
          -0.5 * k2};
}

Eigen::VectorXcd nonlinear_term(const Eigen::VectorXcd& values,
                                const CqgleParams& params) {
  const std::complex<double> cubic = kImag * std::complex<double>{1.0, -params.mu};
  const std::complex<double> quintic =
      kImag * std::complex<double>{params.nu, -params.eps};
  Eigen::VectorXcd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double a2 = std::norm(values[i]);
    out[i] = (cubic * a2 + quintic * a2 * a2) * values[i];
  }
  return out;
}

FieldState initial_condition(const GridSpec& grid, double amplitude,
                             double width) {
  if (!(amplitude > 0.0) || !(width > 0.0))
    throw std::invalid_argument(
        "initial_condition: amplitude and width must be positive");
  FieldState state{grid, Eigen::VectorXcd(grid.n()), 0.0};
  for (int i = 0; i < grid.n(); ++i) {
    state.values[i] = amplitude / std::cosh(grid.nodes()[i] / width);
  }
  return state;
}

}  // namespace sparsedyn
