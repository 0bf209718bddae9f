#include "sparsedyn/pde_sim.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

namespace {

constexpr int kContourPoints = 32;

bool finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      return false;
  }
  return true;
}

// Whole number of dt steps covering the interval, within tolerance.
long steps_between(double t_from, double t_to, double dt) {
  const long k = std::lround((t_to - t_from) / dt);
  if (k < 0 || std::abs(k * dt - (t_to - t_from)) > 1e-9)
    throw std::invalid_argument(
        "simulate: dt does not divide the snapshot spacing");
  return k;
}

}  // namespace

Etdrk4Stepper::Etdrk4Stepper(const GridSpec& grid, const CqgleParams& params,
                             double dt, bool dealias)
    : grid_(grid), params_(params), dt_(dt), dealias_(dealias),
      fft_(grid.n()) {
  if (!(dt > 0.0)) throw std::invalid_argument("Etdrk4Stepper: dt must be > 0");
  if (!params.all_finite())
    throw std::invalid_argument("Etdrk4Stepper: parameters must be finite");

  const int n = grid_.n();
  exp_full_.resize(n);
  exp_half_.resize(n);
  coef_q_.resize(n);
  coef_f1_.resize(n);
  coef_f2_.resize(n);
  coef_f3_.resize(n);

  // Unit-circle quadrature points at half-angles, full circle: the
  // multipliers are complex, so conjugate symmetry cannot be exploited.
  std::vector<std::complex<double>> contour(kContourPoints);
  for (int m = 0; m < kContourPoints; ++m) {
    const double theta =
        2.0 * std::numbers::pi * (m + 0.5) / kContourPoints;
    contour[m] = std::polar(1.0, theta);
  }

  for (int i = 0; i < n; ++i) {
    const std::complex<double> z =
        dt_ * linear_symbol(params_, grid_.wavenumbers()[i]);
    exp_full_[i] = std::exp(z);
    exp_half_[i] = std::exp(0.5 * z);

    std::complex<double> q{}, f1{}, f2{}, f3{};
    for (const auto& r : contour) {
      const std::complex<double> zeta = z + r;
      const std::complex<double> ez = std::exp(zeta);
      const std::complex<double> ez2 = std::exp(0.5 * zeta);
      const std::complex<double> zeta3 = zeta * zeta * zeta;
      q += (ez2 - 1.0) / zeta;
      f1 += (-4.0 - zeta + ez * (4.0 - 3.0 * zeta + zeta * zeta)) / zeta3;
      f2 += (2.0 + zeta + ez * (zeta - 2.0)) / zeta3;
      f3 += (-4.0 - 3.0 * zeta - zeta * zeta + ez * (4.0 - zeta)) / zeta3;
    }
    const double w = dt_ / kContourPoints;
    coef_q_[i] = w * q;
    coef_f1_[i] = w * f1;
    coef_f2_[i] = w * f2;
    coef_f3_[i] = w * f3;
  }

  dealias_mask_.resize(n);
  const double k_max = grid_.wavenumbers().cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    dealias_mask_[i] =
        (std::abs(grid_.wavenumbers()[i]) <= (2.0 / 3.0) * k_max) ? 1.0 : 0.0;
  }
}

Eigen::VectorXcd Etdrk4Stepper::apply_nonlinear(
    const Eigen::VectorXcd& spectrum) {
  Eigen::VectorXcd phys = fft_.inverse(spectrum);
  Eigen::VectorXcd spec = fft_.forward(nonlinear_term(phys, params_));
  if (dealias_) spec.array() *= dealias_mask_.array();
  return spec;
}

void Etdrk4Stepper::step(FieldState& state) {
  if (state.grid != grid_ || !state.consistent())
    throw std::invalid_argument("Etdrk4Stepper: state/grid mismatch");

  const Eigen::VectorXcd v = fft_.forward(state.values);

  const Eigen::VectorXcd nv = apply_nonlinear(v);
  const Eigen::VectorXcd a =
      exp_half_.cwiseProduct(v) + coef_q_.cwiseProduct(nv);
  const Eigen::VectorXcd na = apply_nonlinear(a);
  const Eigen::VectorXcd b =
      exp_half_.cwiseProduct(v) + coef_q_.cwiseProduct(na);
  const Eigen::VectorXcd nb = apply_nonlinear(b);
  const Eigen::VectorXcd c =
      exp_half_.cwiseProduct(a) + coef_q_.cwiseProduct(2.0 * nb - nv);
  const Eigen::VectorXcd nc = apply_nonlinear(c);

  const Eigen::VectorXcd next = exp_full_.cwiseProduct(v) +
                                coef_f1_.cwiseProduct(nv) +
                                2.0 * coef_f2_.cwiseProduct(na + nb) +
                                coef_f3_.cwiseProduct(nc);

  state.values = fft_.inverse(next);
  state.time += dt_;
  if (!finite(state.values))
    throw NonFiniteField("ETDRK4 step produced non-finite values at t = " +
                         std::to_string(state.time));
}

FieldState step_etdrk4(const FieldState& state, const CqgleParams& params,
                       double dt) {
  Etdrk4Stepper stepper(state.grid, params, dt);
  FieldState out = state;
  stepper.step(out);
  return out;
}

SimulationResult simulate(const CqgleParams& params, const FieldState& ic,
                          double t_end, double dt,
                          const std::vector<double>& snapshot_times,
                          int regime_id, bool dealias) {
  for (std::size_t i = 1; i < snapshot_times.size(); ++i) {
    if (snapshot_times[i] < snapshot_times[i - 1])
      throw std::invalid_argument("simulate: snapshot times must be sorted");
  }
  if (!snapshot_times.empty() && snapshot_times.back() > t_end + 1e-9)
    throw std::invalid_argument("simulate: snapshot time beyond t_end");

  Etdrk4Stepper stepper(ic.grid, params, dt, dealias);
  FieldState state = ic;

  SnapshotMatrix snaps;
  snaps.regime_id = regime_id;
  snaps.data.resize(ic.grid.n(), static_cast<Eigen::Index>(snapshot_times.size()));
  snaps.times = snapshot_times;

  const double t0 = ic.time;
  long step_count = 0;
  for (std::size_t j = 0; j < snapshot_times.size(); ++j) {
    const long target = steps_between(t0, snapshot_times[j], dt);
    for (; step_count < target; ++step_count) stepper.step(state);
    state.time = t0 + step_count * dt;  // avoid accumulated drift
    snaps.data.col(static_cast<Eigen::Index>(j)) = state.values;
  }
  const long final_steps = steps_between(t0, t_end, dt);
  for (; step_count < final_steps; ++step_count) stepper.step(state);
  state.time = t0 + step_count * dt;

  return {std::move(snaps), std::move(state)};
}

ScheduleResult simulate_schedule(const BetaSchedule& schedule,
                                 const FieldState& ic, double t_end, double dt,
                                 double snapshot_stride, bool dealias) {
  schedule.validate();
  if (!(snapshot_stride > 0.0))
    throw std::invalid_argument("simulate_schedule: stride must be > 0");
  if (t_end < schedule.segments.back().t_start)
    throw std::invalid_argument(
        "simulate_schedule: t_end precedes the last segment");
  if (ic.time != 0.0)
    throw std::invalid_argument("simulate_schedule: schedule starts at t = 0");

  const long n_snaps =
      static_cast<long>(std::floor((t_end + 1e-9) / snapshot_stride)) + 1;

  SnapshotMatrix snaps;
  snaps.data.resize(ic.grid.n(), n_snaps);
  snaps.times.resize(n_snaps);
  snaps.regime_id = -1;  // mixed-regime matrix
  std::vector<int> snapshot_regimes(n_snaps);

  FieldState state = ic;
  long step_count = 0;
  long snap_idx = 0;

  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const auto& seg = schedule.segments[s];
    if (seg.t_start >= t_end && s > 0) break;
    const double seg_end = (s + 1 < schedule.segments.size())
                               ? std::min(schedule.segments[s + 1].t_start, t_end)
                               : t_end;
    const bool last_segment =
        (s + 1 == schedule.segments.size()) || seg_end >= t_end;

    Etdrk4Stepper stepper(ic.grid, seg.params, dt, dealias);
    const long seg_end_steps = steps_between(0.0, seg_end, dt);

    while (true) {
      if (snap_idx < n_snaps) {
        const double t_snap = snap_idx * snapshot_stride;
        const long k_snap = steps_between(0.0, t_snap, dt);
        // A snapshot at a switch instant belongs to the segment that begins
        // there, so it is emitted by the next iteration of the outer loop.
        if (k_snap == step_count &&
            (k_snap < seg_end_steps || (last_segment && k_snap == seg_end_steps))) {
          snaps.data.col(snap_idx) = state.values;
          snaps.times[snap_idx] = t_snap;
          snapshot_regimes[snap_idx] = seg.regime_id;
          ++snap_idx;
        }
      }
      if (step_count >= seg_end_steps) break;
      stepper.step(state);
      ++step_count;
      state.time = step_count * dt;
    }
  }

  if (snap_idx != n_snaps)
    throw std::invalid_argument(
        "simulate_schedule: dt does not divide the snapshot stride");

  state.time = step_count * dt;
  return {std::move(snaps), std::move(snapshot_regimes), std::move(state)};
}

}  // namespace sparsedyn
