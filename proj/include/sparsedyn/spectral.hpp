#pragma once

#include <complex>

#include <Eigen/Core>

namespace sparsedyn {

/// Forward/inverse complex FFT of a fixed size, wrapping FFTW plans.
///
/// The inverse transform carries the 1/n normalization so that
/// inverse(forward(u)) == u up to round-off.  Plan creation is serialized
/// internally (the FFTW planner is not thread-safe); separate instances may
/// execute concurrently on different threads.
class SpectralTransform {
 public:
  explicit SpectralTransform(int n);
  ~SpectralTransform();

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  int size() const { return n_; }

  void forward(const Eigen::VectorXcd& in, Eigen::VectorXcd& out);
  void inverse(const Eigen::VectorXcd& in, Eigen::VectorXcd& out);

  Eigen::VectorXcd forward(const Eigen::VectorXcd& in);
  Eigen::VectorXcd inverse(const Eigen::VectorXcd& in);

 private:
  void execute(void* plan, const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
               double scale);

  int n_;
  void* plan_fwd_;
  void* plan_bwd_;
  std::complex<double>* buf_in_;
  std::complex<double>* buf_out_;
};

}  // namespace sparsedyn
