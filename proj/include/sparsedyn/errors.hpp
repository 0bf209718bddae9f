#pragma once

#include <stdexcept>
#include <string>

namespace sparsedyn {

/// A field value became non-finite during time stepping (blow-up or
/// unstable step size).
struct NonFiniteField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hermitian eigensolver failed to converge.
struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All singular values of a snapshot matrix are zero.
struct DegenerateData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DuplicateRegime : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two sensors map to the same grid node.
struct DuplicateSensor : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested sensor position lies outside the periodic domain.
struct OutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every sparse coefficient is zero; the measurement carries no
/// information to classify.
struct AllZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Corrupt or incompatible file contents (bad magic, version, sizes).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sparsedyn
