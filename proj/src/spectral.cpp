#include "sparsedyn/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace sparsedyn {

namespace {
// The FFTW planner mutates global state; executing existing plans is safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralTransform::SpectralTransform(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("SpectralTransform: n must be > 0");
  buf_in_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_));
  buf_out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_));
  std::lock_guard<std::mutex> lock(planner_mutex());
  // FFTW_ESTIMATE keeps planning deterministic run-to-run.
  plan_fwd_ = fftw_plan_dft_1d(n_, reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_),
                               FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(n_, reinterpret_cast<fftw_complex*>(buf_in_),
                               reinterpret_cast<fftw_complex*>(buf_out_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_in_);
  fftw_free(buf_out_);
}

void SpectralTransform::execute(void* plan, const Eigen::VectorXcd& in,
                                Eigen::VectorXcd& out, double scale) {
  if (in.size() != n_)
    throw std::invalid_argument("SpectralTransform: size mismatch");
  for (int i = 0; i < n_; ++i) buf_in_[i] = in[i];
  fftw_execute(static_cast<fftw_plan>(plan));
  out.resize(n_);
  for (int i = 0; i < n_; ++i) out[i] = buf_out_[i] * scale;
}

void SpectralTransform::forward(const Eigen::VectorXcd& in,
                                Eigen::VectorXcd& out) {
  execute(plan_fwd_, in, out, 1.0);
}

void SpectralTransform::inverse(const Eigen::VectorXcd& in,
                                Eigen::VectorXcd& out) {
  execute(plan_bwd_, in, out, 1.0 / n_);
}

Eigen::VectorXcd SpectralTransform::forward(const Eigen::VectorXcd& in) {
  Eigen::VectorXcd out;
  forward(in, out);
  return out;
}

Eigen::VectorXcd SpectralTransform::inverse(const Eigen::VectorXcd& in) {
  Eigen::VectorXcd out;
  inverse(in, out);
  return out;
}

}  // namespace sparsedyn
