#include "sparsedyn/rom.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsedyn/errors.hpp"
#include "sparsedyn/spectral.hpp"

namespace sparsedyn {

namespace {

bool finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      return false;
  }
  return true;
}

}  // namespace

GalerkinModel build_galerkin(const ModalLibrary& lib, int regime_id,
                             const CqgleParams& params, const GridSpec& grid) {
  if (lib.n() != grid.n())
    throw DimensionMismatch("build_galerkin: grid size != library rows");
  return build_galerkin(lib.block_for_regime(regime_id).modes, regime_id,
                        params, grid);
}

GalerkinModel build_galerkin(const Eigen::MatrixXcd& modes, int regime_id,
                             const CqgleParams& params, const GridSpec& grid) {
  if (modes.rows() != grid.n())
    throw DimensionMismatch("build_galerkin: grid size != mode rows");
  if (modes.cols() < 1)
    throw std::invalid_argument("build_galerkin: empty mode set");

  const int n = grid.n();
  const int r = static_cast<int>(modes.cols());

  Eigen::VectorXcd multiplier(n);
  for (int i = 0; i < n; ++i)
    multiplier[i] = linear_symbol(params, grid.wavenumbers()[i]);

  // L Psi column by column via the Fourier multiplier, then project.
  SpectralTransform fft(n);
  Eigen::MatrixXcd l_modes(n, r);
  for (int j = 0; j < r; ++j) {
    Eigen::VectorXcd spectrum = fft.forward(modes.col(j));
    spectrum.array() *= multiplier.array();
    l_modes.col(j) = fft.inverse(spectrum);
  }

  GalerkinModel model{regime_id, modes, modes.adjoint() * l_modes, params,
                      grid};
  return model;
}

Eigen::VectorXcd rom_rhs(const GalerkinModel& model,
                         const Eigen::VectorXcd& a) {
  if (a.size() != model.rank())
    throw std::invalid_argument("rom_rhs: amplitude length != rank");
  const Eigen::VectorXcd field = model.modes * a;
  return model.linear_matrix * a +
         model.modes.adjoint() * nonlinear_term(field, model.params);
}

CoefficientTrajectory integrate_rom(const GalerkinModel& model,
                                    const Eigen::VectorXcd& a0, double t_start,
                                    double t_end, double dt, double dt_out) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rom: dt must be > 0");
  if (t_end < t_start)
    throw std::invalid_argument("integrate_rom: t_end precedes t_start");

  const long stride = std::lround(dt_out / dt);
  if (stride < 1 || std::abs(stride * dt - dt_out) > 1e-9)
    throw std::invalid_argument("integrate_rom: dt must divide dt_out");
  const long total_steps = std::lround((t_end - t_start) / dt);
  if (std::abs(total_steps * dt - (t_end - t_start)) > 1e-9)
    throw std::invalid_argument("integrate_rom: dt must divide the span");

  CoefficientTrajectory traj;
  Eigen::VectorXcd a = a0;
  traj.times.push_back(t_start);
  traj.amplitudes.push_back(a);

  for (long step = 1; step <= total_steps; ++step) {
    const Eigen::VectorXcd k1 = rom_rhs(model, a);
    const Eigen::VectorXcd k2 = rom_rhs(model, a + 0.5 * dt * k1);
    const Eigen::VectorXcd k3 = rom_rhs(model, a + 0.5 * dt * k2);
    const Eigen::VectorXcd k4 = rom_rhs(model, a + dt * k3);
    a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(a))
      throw NonFiniteField("ROM trajectory blew up at t = " +
                           std::to_string(t_start + step * dt));
    if (step % stride == 0) {
      traj.times.push_back(t_start + step * dt);
      traj.amplitudes.push_back(a);
    }
  }
  return traj;
}

FieldState reconstruct_field(const GalerkinModel& model,
                             const Eigen::VectorXcd& a, double time) {
  if (a.size() != model.rank())
    throw std::invalid_argument("reconstruct_field: amplitude length != rank");
  return FieldState{model.grid, model.modes * a, time};
}

}  // namespace sparsedyn
