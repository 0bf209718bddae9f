#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>

#include "sparsedyn/errors.hpp"
#include "sparsedyn/pde_sim.hpp"

using namespace sparsedyn;
using Complex = std::complex<double>;

namespace {

const CqgleParams kBeta1{-0.3, -0.05, 1.45, 0.0, -0.1, -0.5};
const CqgleParams kBeta4{0.125, 0.0, 1.0, -0.6, -0.1, -0.1};

// Independent oracle: apply the spatial operator of the governing equation
// to e^{ikx} with central differences, Richardson-extrapolated once so the
// fourth derivative stays clear of round-off, and read off the multiplier
// at x = 0.
Complex symbol_via_stencil(const CqgleParams& p, double k) {
  auto u = [&](double x) { return std::exp(Complex(0.0, k * x)); };
  const Complex u0 = u(0.0);
  auto d2 = [&](double h) { return (u(h) - 2.0 * u0 + u(-h)) / (h * h); };
  auto d4 = [&](double h) {
    return (u(2 * h) - 4.0 * u(h) + 6.0 * u0 - 4.0 * u(-h) + u(-2 * h)) /
           (h * h * h * h);
  };
  const double h = 0.01;
  const Complex uxx = (4.0 * d2(h / 2) - d2(h)) / 3.0;
  const Complex uxxxx = (4.0 * d4(h / 2) - d4(h)) / 3.0;
  // i * [ (1/2 - i tau) u_xx - i kappa u_xxxx - i gamma u ] evaluated at x=0
  const Complex i{0.0, 1.0};
  return i * ((Complex(0.5, 0.0) - i * p.tau) * uxx - i * p.kappa * uxxxx -
              i * p.gamma * u0) / u0;
}

// Classical RK4 on the semi-discrete system U_t = L U + N(U), the linear
// part applied through the same Fourier multiplier.  Serves as the
// one-step reference for the exponential integrator.
FieldState rk4_reference_step(const FieldState& state, const CqgleParams& p,
                              double dt) {
  SpectralTransform fft(state.grid.n());
  Eigen::VectorXcd mult(state.grid.n());
  for (int i = 0; i < state.grid.n(); ++i)
    mult[i] = linear_symbol(p, state.grid.wavenumbers()[i]);
  auto rhs = [&](const Eigen::VectorXcd& u) -> Eigen::VectorXcd {
    Eigen::VectorXcd spec = fft.forward(u);
    spec.array() *= mult.array();
    return fft.inverse(spec) + nonlinear_term(u, p);
  };
  const Eigen::VectorXcd& u = state.values;
  const Eigen::VectorXcd k1 = rhs(u);
  const Eigen::VectorXcd k2 = rhs(u + 0.5 * dt * k1);
  const Eigen::VectorXcd k3 = rhs(u + 0.5 * dt * k2);
  const Eigen::VectorXcd k4 = rhs(u + dt * k3);
  return {state.grid, u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
          state.time + dt};
}

}  // namespace

TEST_CASE("grid nodes and wavenumbers follow the FFT convention") {
  GridSpec grid(8, -4.0, 4.0);
  CHECK(grid.dx() == doctest::Approx(1.0));
  CHECK(grid.nodes()[0] == doctest::Approx(-4.0));
  CHECK(grid.nodes()[7] == doctest::Approx(3.0));
  const double k0 = 2.0 * std::numbers::pi / 8.0;
  CHECK(grid.wavenumbers()[0] == doctest::Approx(0.0));
  CHECK(grid.wavenumbers()[3] == doctest::Approx(3.0 * k0));
  CHECK(grid.wavenumbers()[4] == doctest::Approx(-4.0 * k0));
  CHECK(grid.wavenumbers()[7] == doctest::Approx(-k0));
  CHECK_THROWS_AS(GridSpec(12, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(8, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("initial condition is a sech profile") {
  GridSpec grid(1024, -20.0, 20.0);

  FieldState a = initial_condition(grid, 1.0, 1.0);
  CHECK(a.time == 0.0);
  const int at_zero = grid.nearest_index(0.0);
  CHECK(a.values[at_zero].real() == doctest::Approx(1.0));
  CHECK(a.values[at_zero].imag() == 0.0);

  FieldState b = initial_condition(grid, 0.5, 1.0);
  CHECK(b.values[at_zero].real() == doctest::Approx(0.5));

  FieldState c = initial_condition(grid, 1.0, 2.0);
  const int at_two = grid.nearest_index(2.0);
  CHECK(c.values[at_two].real() ==
        doctest::Approx(1.0 / std::cosh(grid.nodes()[at_two] / 2.0)));
  CHECK(c.values[at_two].real() ==
        doctest::Approx(1.0 / std::cosh(1.0)).epsilon(5e-3));

  CHECK_THROWS_AS(initial_condition(grid, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(initial_condition(grid, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("linear symbol matches hand values and the stencil oracle") {
  CqgleParams any{0.7, -0.3, 1.0, 2.0, -0.5, -0.25};
  CHECK(linear_symbol(any, 0.0) == Complex(any.gamma, 0.0));

  const Complex c1 = linear_symbol(kBeta1, 1.0);
  CHECK(c1.real() == doctest::Approx(-0.25));
  CHECK(c1.imag() == doctest::Approx(-0.5));

  const Complex c4 = linear_symbol(kBeta4, 2.0);
  CHECK(c4.real() == doctest::Approx(-0.6));
  CHECK(c4.imag() == doctest::Approx(-2.0));

  for (double k : {0.5, 1.0, 2.0, 2.5}) {
    for (const auto& p : {kBeta1, kBeta4}) {
      const Complex direct = linear_symbol(p, k);
      const Complex stencil = symbol_via_stencil(p, k);
      CHECK(std::abs(direct - stencil) < 1e-6);
    }
  }
}

TEST_CASE("nonlinear term hand values") {
  CqgleParams p;

  SUBCASE("zero field maps to zero") {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(4);
    CHECK(nonlinear_term(u, kBeta1).norm() == 0.0);
  }

  SUBCASE("cubic part, mu = 1") {
    p.mu = 1.0;
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(3);
    u[1] = 1.0;
    const Eigen::VectorXcd out = nonlinear_term(u, p);
    CHECK(out[0] == Complex(0.0, 0.0));
    CHECK(out[1].real() == doctest::Approx(1.0));
    CHECK(out[1].imag() == doctest::Approx(1.0));
  }

  SUBCASE("cubic plus quintic, nu = 1") {
    p.nu = 1.0;
    Eigen::VectorXcd u = Eigen::VectorXcd::Constant(1, Complex(1.0, 0.0));
    const Eigen::VectorXcd out = nonlinear_term(u, p);
    CHECK(out[0].real() == doctest::Approx(0.0));
    CHECK(out[0].imag() == doctest::Approx(2.0));
  }
}

TEST_CASE("ETDRK4 keeps the zero field exactly zero") {
  GridSpec grid(64, -20.0, 20.0);
  FieldState state{grid, Eigen::VectorXcd::Zero(64), 0.0};
  Etdrk4Stepper stepper(grid, kBeta1, 0.05);
  for (int i = 0; i < 20; ++i) stepper.step(state);
  CHECK(state.values.norm() == 0.0);
  CHECK(state.time == doctest::Approx(1.0));
}

TEST_CASE("ETDRK4 is exact for the linear equation regardless of dt") {
  GridSpec grid(64, -20.0, 20.0);
  CqgleParams linear = kBeta1;
  linear.mu = linear.nu = linear.eps = 0.0;

  // Amplitude small enough that the mu-independent cubic term i|U|^2 U
  // stays far below the 1e-10 comparison threshold over the run.
  const double k = grid.wavenumbers()[3];
  Eigen::VectorXcd u0(64);
  for (int i = 0; i < 64; ++i)
    u0[i] = 1e-6 * std::exp(Complex(0.0, k * grid.nodes()[i]));

  for (double dt : {0.5, 0.1, 0.025}) {
    FieldState state{grid, u0, 0.0};
    Etdrk4Stepper stepper(grid, linear, dt);
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i < steps; ++i) stepper.step(state);
    const Complex growth = std::exp(linear_symbol(linear, k) * 2.0);
    Eigen::VectorXcd expected = u0 * growth;
    CHECK((state.values - expected).norm() / expected.norm() < 1e-10);
  }
}

TEST_CASE("one ETDRK4 step matches a classical RK4 reference step") {
  // Modest grid keeps h*c(k) small enough for the explicit reference to be
  // meaningful; both integrators then differ only at O(dt^5).
  GridSpec grid(64, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);

  const double dt = 0.01;
  const FieldState etd = step_etdrk4(ic, kBeta1, dt);
  const FieldState ref = rk4_reference_step(ic, kBeta1, dt);
  const double diff = (etd.values - ref.values).norm();
  CHECK(diff < 1e-7);

  // The gap shrinks by ~2^5 when dt halves (both methods are 4th order, so
  // their difference is the O(dt^5) local truncation mismatch).
  const double diff_half = (step_etdrk4(ic, kBeta1, dt / 2).values -
                            rk4_reference_step(ic, kBeta1, dt / 2).values)
                               .norm();
  CHECK(diff / diff_half > 16.0);
  CHECK(diff / diff_half < 64.0);
}

TEST_CASE("ETDRK4 endpoint convergence is fourth order") {
  GridSpec grid(256, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);

  auto endpoint = [&](double dt) {
    FieldState state = ic;
    Etdrk4Stepper stepper(grid, kBeta1, dt);
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < steps; ++i) stepper.step(state);
    return state.values;
  };

  const Eigen::VectorXcd reference = endpoint(1e-4);
  const double err_coarse = (endpoint(0.02) - reference).norm();
  const double err_fine = (endpoint(0.01) - reference).norm();
  const double ratio = err_coarse / err_fine;
  CHECK(ratio > 10.0);
  CHECK(ratio < 24.0);
}

TEST_CASE("ETDRK4 flags blow-up as NonFiniteField") {
  GridSpec grid(64, -20.0, 20.0);
  CqgleParams unstable = kBeta1;
  unstable.eps = 0.5;  // quintic gain: finite-time blow-up from order-1 data
  FieldState state = initial_condition(grid, 1.0, 1.0);
  Etdrk4Stepper stepper(grid, unstable, 0.05);
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 2000; ++i) stepper.step(state);
      }(),
      NonFiniteField);
}

TEST_CASE("simulate returns requested snapshots and final state") {
  GridSpec grid(128, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);

  SUBCASE("snapshot at t = 0 only") {
    auto result = simulate(kBeta1, ic, 0.5, 0.01, {0.0}, 7);
    CHECK(result.snapshots.q() == 1);
    CHECK(result.snapshots.regime_id == 7);
    CHECK((result.snapshots.data.col(0) - ic.values).norm() == 0.0);
    CHECK(result.final_state.time == doctest::Approx(0.5));
  }

  SUBCASE("misaligned snapshot spacing is rejected") {
    CHECK_THROWS_AS(simulate(kBeta1, ic, 1.0, 0.3, {0.5}, 0),
                    std::invalid_argument);
  }

  SUBCASE("unsorted snapshot times are rejected") {
    CHECK_THROWS_AS(simulate(kBeta1, ic, 1.0, 0.1, {0.5, 0.2}, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("beta1 settles onto its attractor inside the snapshot window") {
  GridSpec grid(1024, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);
  std::vector<double> window;
  for (int t = 40; t <= 80; ++t) window.push_back(t);
  auto run = simulate(kBeta1, ic, 80.0, 0.01, window, 1);
  CHECK(run.snapshots.q() == 41);

  // Settled attractor: the per-snapshot energy of the dominant direction is
  // stable when recomputed from the trailing half of the window.
  auto dominant_sigma = [](const Eigen::MatrixXcd& data) {
    Eigen::MatrixXcd corr = data.adjoint() * data;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(corr);
    return std::sqrt(es.eigenvalues().maxCoeff() /
                     static_cast<double>(data.cols()));
  };
  const double full = dominant_sigma(run.snapshots.data);
  const double tail = dominant_sigma(run.snapshots.data.rightCols(21));
  CHECK(std::abs(full - tail) / full < 0.05);
}

TEST_CASE("beta4 stays bounded over the snapshot window") {
  GridSpec grid(1024, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);
  std::vector<double> window;
  for (int t = 40; t <= 80; ++t) window.push_back(t);
  auto run = simulate(kBeta4, ic, 80.0, 0.01, window, 4);

  double max_abs = 0.0;
  double min_col = 1e300, max_col = 0.0;
  for (Eigen::Index c = 0; c < run.snapshots.q(); ++c) {
    max_abs = std::max(max_abs, run.snapshots.data.col(c).cwiseAbs().maxCoeff());
    const double norm = run.snapshots.data.col(c).norm();
    min_col = std::min(min_col, norm);
    max_col = std::max(max_col, norm);
  }
  CHECK(max_abs < 50.0);        // bounded
  CHECK(max_col / min_col > 1.2);  // but visibly time-varying
}

TEST_CASE("simulation is deterministic") {
  GridSpec grid(256, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);
  auto a = simulate(kBeta4, ic, 5.0, 0.01, {5.0}, 4);
  auto b = simulate(kBeta4, ic, 5.0, 0.01, {5.0}, 4);
  CHECK((a.snapshots.data.array() == b.snapshots.data.array()).all());
  CHECK((a.final_state.values.array() == b.final_state.values.array()).all());
}

TEST_CASE("schedule integration carries state across switches") {
  GridSpec grid(128, -20.0, 20.0);
  const FieldState ic = initial_condition(grid, 1.0, 1.0);
  const CqgleParams beta3{0.08, 0.0, 0.66, -0.1, -0.1, -0.1};

  SUBCASE("single segment equals plain simulate") {
    BetaSchedule schedule{{{0.0, 1, kBeta1}}};
    auto sched = simulate_schedule(schedule, ic, 2.0, 0.01, 1.0);
    auto plain = simulate(kBeta1, ic, 2.0, 0.01, {0.0, 1.0, 2.0}, 1);
    CHECK(sched.snapshots.q() == 3);
    CHECK((sched.snapshots.data - plain.snapshots.data).norm() == 0.0);
    CHECK(sched.snapshot_regimes == std::vector<int>{1, 1, 1});
  }

  SUBCASE("switch instant belongs to the new segment and state is continuous") {
    BetaSchedule schedule{{{0.0, 1, kBeta1}, {2.0, 3, beta3}}};
    auto sched = simulate_schedule(schedule, ic, 4.0, 0.01, 1.0);
    CHECK(sched.snapshot_regimes == std::vector<int>{1, 1, 3, 3, 3});

    // The snapshot at the switch equals the end of a pure first-segment run.
    auto first = simulate(kBeta1, ic, 2.0, 0.01, {2.0}, 1);
    CHECK((sched.snapshots.data.col(2) - first.snapshots.data.col(0)).norm() ==
          0.0);
  }

  SUBCASE("invalid schedules are rejected") {
    BetaSchedule late{{{1.0, 1, kBeta1}}};
    CHECK_THROWS_AS(simulate_schedule(late, ic, 2.0, 0.01, 1.0),
                    std::invalid_argument);
    BetaSchedule unordered{{{0.0, 1, kBeta1}, {0.0, 3, beta3}}};
    CHECK_THROWS_AS(simulate_schedule(unordered, ic, 2.0, 0.01, 1.0),
                    std::invalid_argument);
  }
}
