#include "sparsedyn/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sparsedyn/errors.hpp"

namespace sparsedyn {

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Uniforms strictly inside (0, 1): offset by half an ulp of the 53-bit grid.
  const double u1 =
      (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 =
      (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

SensorSet place_sensors(const GridSpec& grid,
                        const std::vector<double>& positions) {
  if (positions.empty())
    throw std::invalid_argument("place_sensors: no positions given");

  std::vector<std::pair<int, double>> mapped;
  mapped.reserve(positions.size());
  for (double x : positions) {
    if (x < grid.x_min() || x >= grid.x_max())
      throw OutOfDomain("sensor position " + std::to_string(x) +
                        " outside [x_min, x_max)");
    mapped.emplace_back(grid.nearest_index(x), x);
  }
  std::sort(mapped.begin(), mapped.end());
  for (std::size_t i = 1; i < mapped.size(); ++i) {
    if (mapped[i].first == mapped[i - 1].first)
      throw DuplicateSensor("positions " + std::to_string(mapped[i - 1].second) +
                            " and " + std::to_string(mapped[i].second) +
                            " share grid node " +
                            std::to_string(mapped[i].first));
  }

  SensorSet set;
  set.positions.reserve(mapped.size());
  set.indices.reserve(mapped.size());
  for (const auto& [idx, x] : mapped) {
    set.indices.push_back(idx);
    set.positions.push_back(x);
  }
  return set;
}

Measurement measure(const FieldState& field, const SensorSet& sensors,
                    double sigma, std::uint64_t rng_seed) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("measure: sigma must be >= 0");

  Measurement m;
  m.time = field.time;
  m.sigma = sigma;
  m.values.resize(sensors.m());

  GaussianSource noise(rng_seed);
  const double component_sd = sigma / std::numbers::sqrt2;
  for (int i = 0; i < sensors.m(); ++i) {
    std::complex<double> value = field.values[sensors.indices[i]];
    if (sigma > 0.0) {
      value += std::complex<double>{component_sd * noise.next(),
                                    component_sd * noise.next()};
    }
    m.values[i] = value;
  }
  return m;
}

Eigen::MatrixXcd compressed_dictionary(const ModalLibrary& lib,
                                       const SensorSet& sensors) {
  Eigen::MatrixXcd G(sensors.m(), lib.p());
  for (int i = 0; i < sensors.m(); ++i) {
    if (sensors.indices[i] < 0 || sensors.indices[i] >= lib.n())
      throw DimensionMismatch(
          "compressed_dictionary: sensor index outside library rows");
    G.row(i) = lib.matrix().row(sensors.indices[i]);
  }
  return G;
}

}  // namespace sparsedyn
