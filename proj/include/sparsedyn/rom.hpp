#pragma once

#include <vector>

#include <Eigen/Core>

#include "sparsedyn/cqgle.hpp"
#include "sparsedyn/library.hpp"

namespace sparsedyn {

/// Galerkin reduced-order model on one regime's POD block.  The projected
/// linear operator is precomputed; the nonlinearity is evaluated
/// pseudo-spectrally (reconstruct on the grid, apply pointwise, project
/// back), which for r <= ~14 modes is cheaper than cubic/quintic tensors.
struct GalerkinModel {
  int regime_id = 0;
  Eigen::MatrixXcd modes;          // n x r
  Eigen::MatrixXcd linear_matrix;  // r x r, Psi^H L Psi
  CqgleParams params;
  GridSpec grid;

  int rank() const { return static_cast<int>(modes.cols()); }
};

/// Build the model for one library block.
GalerkinModel build_galerkin(const ModalLibrary& lib, int regime_id,
                             const CqgleParams& params, const GridSpec& grid);

/// Build from an explicit mode matrix (orthonormal columns expected).
GalerkinModel build_galerkin(const Eigen::MatrixXcd& modes, int regime_id,
                             const CqgleParams& params, const GridSpec& grid);

/// Right-hand side da/dt = M a + Psi^H N(Psi a).
Eigen::VectorXcd rom_rhs(const GalerkinModel& model, const Eigen::VectorXcd& a);

struct CoefficientTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> amplitudes;
};

/// Classical RK4 on rom_rhs from t_start to t_end, sampled every dt_out
/// (both dt_out and t_end - t_start must be whole multiples of dt).
/// Throws NonFiniteField on blow-up.
CoefficientTrajectory integrate_rom(const GalerkinModel& model,
                                    const Eigen::VectorXcd& a0, double t_start,
                                    double t_end, double dt,
                                    double dt_out = 1.0);

/// Lift modal amplitudes back to the grid: U = Psi a.
FieldState reconstruct_field(const GalerkinModel& model,
                             const Eigen::VectorXcd& a, double time = 0.0);

}  // namespace sparsedyn
