#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "sparsedyn/cqgle.hpp"
#include "sparsedyn/library.hpp"

namespace sparsedyn {

/// Point sensors: requested positions together with the nearest grid nodes.
/// Stored sorted by node index; indices are unique.
struct SensorSet {
  std::vector<double> positions;  // m, ordered to match indices
  std::vector<int> indices;       // m, strictly increasing
  int m() const { return static_cast<int>(indices.size()); }
};

/// Noisy point measurement of a field.
struct Measurement {
  Eigen::VectorXcd values;
  double time = 0.0;
  double sigma = 0.0;
};

/// Map each position to its nearest grid node.  Throws OutOfDomain for
/// positions outside [x_min, x_max) and DuplicateSensor when two positions
/// round to the same node.
SensorSet place_sensors(const GridSpec& grid,
                        const std::vector<double>& positions);

/// Sample the field at the sensor nodes and add circularly-symmetric complex
/// Gaussian noise of total variance sigma^2 (real and imaginary parts each
/// N(0, sigma^2/2)).  Deterministic for a fixed seed.
Measurement measure(const FieldState& field, const SensorSet& sensors,
                    double sigma, std::uint64_t rng_seed);

/// Compressed dictionary G = Phi * Psi: row i of G is row indices[i] of the
/// library matrix.  Throws DimensionMismatch if the sensors index a grid of
/// different size than the library.
Eigen::MatrixXcd compressed_dictionary(const ModalLibrary& lib,
                                       const SensorSet& sensors);

/// Deterministic standard-normal generator: mt19937_64 (bit-exact by the
/// standard) fed through Box-Muller, avoiding the implementation-defined
/// std::normal_distribution.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparsedyn
