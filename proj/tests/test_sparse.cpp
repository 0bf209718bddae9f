#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sparsedyn/sparse.hpp"

using namespace sparsedyn;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_unit_columns(int m, int p, std::mt19937_64& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd g(m, p);
  for (int c = 0; c < p; ++c) {
    for (int r = 0; r < m; ++r) g(r, c) = Complex(dist(gen), dist(gen));
    g.col(c) /= g.col(c).norm();
  }
  return g;
}

// Brute-force uniqueness pre-check for a 2-sparse instance: no other
// 2-column support may interpolate y (within tolerance), so the sparsest
// representation is unambiguous before the solver is scored against it.
bool two_sparse_unique(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& y,
                       int s0, int s1) {
  const int p = static_cast<int>(g.cols());
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      if (a == s0 && b == s1) continue;
      Eigen::MatrixXcd sub(g.rows(), 2);
      sub.col(0) = g.col(a);
      sub.col(1) = g.col(b);
      Eigen::VectorXcd fit =
          sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
      if ((sub * fit - y).norm() < 1e-8 * y.norm()) return false;
    }
  }
  // 1-sparse representations would contradict 2-sparsity as well.
  for (int a = 0; a < p; ++a) {
    const Complex coef = g.col(a).dot(y);
    if ((g.col(a) * coef - y).norm() < 1e-8 * y.norm()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("complex soft threshold") {
  CHECK(soft_threshold_complex({3.0, 4.0}, 5.0) == Complex(0.0, 0.0));
  CHECK(soft_threshold_complex({3.0, 4.0}, 0.0) == Complex(3.0, 4.0));
  CHECK(soft_threshold_complex({2.0, 0.0}, 1.0) == Complex(1.0, 0.0));
  CHECK(soft_threshold_complex({0.0, 0.0}, 1.0) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(soft_threshold_complex({1.0, 0.0}, -0.5),
                  std::invalid_argument);
}

TEST_CASE("soft threshold preserves phase") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Complex z(dist(gen), dist(gen));
    const double t = std::abs(dist(gen));
    const Complex out = soft_threshold_complex(z, t);
    if (std::abs(out) == 0.0) {
      CHECK(std::abs(z) <= t + 1e-15);
    } else {
      // Output is a non-negative real multiple of the input.
      const Complex ratio = out / z;
      CHECK(ratio.imag() == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(ratio.real() >= 0.0);
      CHECK(ratio.real() <= 1.0);
    }
  }
}

TEST_CASE("l1 solve on the identity system has the closed prox form") {
  const int p = 6;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(p, p);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(p);
  y[0] = 1.0;

  SparseSolution sol = solve_l1(g, y, 0.1);
  CHECK(sol.solver_id == SolverId::l1);
  CHECK(sol.converged);
  // The 1e-8 objective-change stop bounds the coefficient error near 1e-6.
  CHECK(std::abs(sol.coeffs[0] - Complex(0.9, 0.0)) < 1e-5);
  for (int j = 1; j < p; ++j) CHECK(std::abs(sol.coeffs[j]) < 1e-9);
}

TEST_CASE("l1 solve of a zero measurement is zero") {
  std::mt19937_64 gen(17);
  Eigen::MatrixXcd g = random_unit_columns(4, 12, gen);
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(4);
  SparseSolution sol = solve_l1(g, y, 0.1);
  CHECK(sol.coeffs.norm() == 0.0);
  CHECK(sol.residual_norm == 0.0);

  SparseSolution cont = solve_l1_continuation(g, y);
  CHECK(cont.coeffs.norm() == 0.0);
}

TEST_CASE("FISTA objective never rises above the zero-vector objective") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXcd g = random_unit_columns(6, 18, gen);
    Eigen::VectorXcd y(6);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 6; ++i) y[i] = Complex(dist(gen), dist(gen));
    const double lambda = 0.05;

    SparseSolution sol = solve_l1(g, y, lambda);
    const double at_solution = lambda * sol.coeffs.cwiseAbs().sum() +
                               0.5 * sol.residual_norm * sol.residual_norm;
    const double at_zero = 0.5 * y.squaredNorm();
    CHECK(at_solution <= at_zero + 1e-12);
  }
}

TEST_CASE("l1 continuation recovers pre-verified 2-sparse signals") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979);

  const int m = 8, p = 32;
  int recovered = 0;
  int instances = 0;
  while (instances < 50) {
    Eigen::MatrixXcd g = random_unit_columns(m, p, gen);
    std::uniform_int_distribution<int> pick(0, p - 1);
    int s0 = pick(gen), s1 = pick(gen);
    if (s0 == s1) continue;
    if (s0 > s1) std::swap(s0, s1);

    Eigen::VectorXcd truth = Eigen::VectorXcd::Zero(p);
    truth[s0] = std::polar(1.0, phase(gen));
    truth[s1] = std::polar(1.0, phase(gen));
    Eigen::VectorXcd y = g * truth;
    if (!two_sparse_unique(g, y, s0, s1)) continue;
    ++instances;

    SparseSolution sol = solve_l1_continuation(g, y);
    // Support recovery: the two largest moduli sit on the true support and
    // every coefficient tracks the truth to 1e-2 in modulus.
    std::vector<int> order(p);
    for (int j = 0; j < p; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(sol.coeffs[a]) > std::abs(sol.coeffs[b]);
    });
    const bool support_ok =
        (std::min(order[0], order[1]) == s0 && std::max(order[0], order[1]) == s1);
    const bool values_ok = (sol.coeffs - truth).cwiseAbs().maxCoeff() < 1e-2;
    if (support_ok && values_ok) ++recovered;
  }
  CHECK(recovered >= 45);
  MESSAGE("recovered ", recovered, " / 50 pre-verified 2-sparse instances");
}

TEST_CASE("OMP behavior") {
  std::mt19937_64 gen(7);
  Eigen::MatrixXcd g = random_unit_columns(6, 16, gen);

  SUBCASE("a pure column is found in one step") {
    Eigen::VectorXcd y = Complex(0.0, 2.0) * g.col(5);
    SparseSolution sol = solve_omp(g, y, 3, 1e-10);
    CHECK(sol.iterations == 1);
    CHECK(std::abs(sol.coeffs[5] - Complex(0.0, 2.0)) < 1e-10);
    CHECK(sol.residual_norm < 1e-10);
  }

  SUBCASE("two well-separated atoms are both recovered") {
    // Verify the coherence condition before trusting the recovery.
    int a = 1, b = 9;
    double coherence = 0.0;
    for (int i = 0; i < 16; ++i)
      for (int j = i + 1; j < 16; ++j)
        coherence = std::max(coherence, std::abs(g.col(i).dot(g.col(j))));
    if (coherence < 0.8) {  // random complex columns in C^6 are spread out
      Eigen::VectorXcd y = 2.0 * g.col(a) - Complex(0.0, 1.5) * g.col(b);
      SparseSolution sol = solve_omp(g, y, 4, 1e-10);
      CHECK(std::abs(sol.coeffs[a] - Complex(2.0, 0.0)) < 1e-8);
      CHECK(std::abs(sol.coeffs[b] - Complex(0.0, -1.5)) < 1e-8);
      CHECK(sol.residual_norm < 1e-8);
    }
  }

  SUBCASE("zero measurement gives an empty support") {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(6);
    SparseSolution sol = solve_omp(g, y, 3, 1e-12);
    CHECK(sol.coeffs.norm() == 0.0);
    CHECK(sol.iterations == 0);
  }

  SUBCASE("invalid k_max is rejected") {
    Eigen::VectorXcd y = g.col(0);
    CHECK_THROWS_AS(solve_omp(g, y, 0, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(solve_omp(g, y, 7, 1e-10), std::invalid_argument);
  }
}

TEST_CASE("least squares baseline") {
  std::mt19937_64 gen(31);

  SUBCASE("square invertible system is solved exactly") {
    Eigen::MatrixXcd g = random_unit_columns(5, 5, gen);
    Eigen::VectorXcd truth(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 5; ++i) truth[i] = Complex(dist(gen), dist(gen));
    Eigen::VectorXcd y = g * truth;
    SparseSolution sol = solve_least_squares(g, y);
    CHECK(sol.solver_id == SolverId::least_squares);
    CHECK((sol.coeffs - truth).norm() < 1e-9);
    CHECK(sol.residual_norm < 1e-9);
  }

  SUBCASE("underdetermined system returns the minimum-norm interpolant") {
    Eigen::MatrixXcd g = random_unit_columns(4, 12, gen);
    Eigen::VectorXcd y(4);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 4; ++i) y[i] = Complex(dist(gen), dist(gen));
    SparseSolution sol = solve_least_squares(g, y);
    CHECK((g * sol.coeffs - y).norm() < 1e-10 * y.norm());

    // Minimum-norm solutions live in the row space: G (G^H w) = y.
    Eigen::VectorXcd w =
        (g * g.adjoint())
            .jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
            .solve(y);
    CHECK((sol.coeffs - g.adjoint() * w).norm() < 1e-8);
  }

  SUBCASE("zero column receives a zero coefficient") {
    Eigen::MatrixXcd g = random_unit_columns(4, 8, gen);
    g.col(3).setZero();
    Eigen::VectorXcd y(4);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 4; ++i) y[i] = Complex(dist(gen), dist(gen));
    SparseSolution sol = solve_least_squares(g, y);
    CHECK(std::abs(sol.coeffs[3]) < 1e-12);
  }

  SUBCASE("consistency: range-space targets fit to near machine precision") {
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXcd g = random_unit_columns(5, 11, gen);
      Eigen::VectorXcd a(11);
      std::normal_distribution<double> dist(0.0, 1.0);
      for (int i = 0; i < 11; ++i) a[i] = Complex(dist(gen), dist(gen));
      Eigen::VectorXcd y = g * a;
      SparseSolution sol = solve_least_squares(g, y);
      CHECK(sol.residual_norm <= 1e-8 * y.norm());
    }
  }
}
