#include "rppg/fft.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

#include "rppg/error.hpp"

namespace rppg::fft {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorKind::InsufficientData, "fft of empty signal");
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(n);
  auto* spec = fftw_alloc_complex(n / 2 + 1);
  spec_ = spec;
  const int ni = static_cast<int>(n);
  fwd_ = fftw_plan_dft_r2c_1d(ni, real_, spec, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_c2r_1d(ni, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  fftw_free(real_);
  fftw_free(spec_);
}

std::vector<Complex> RealFft::forward(std::span<const double> x) {
  if (x.size() != n_) throw Error(ErrorKind::Alignment, "fft length mismatch");
  std::copy(x.begin(), x.end(), real_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  const auto* spec = static_cast<const fftw_complex*>(spec_);
  std::vector<Complex> out(bins());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
  return out;
}

std::vector<double> RealFft::inverse(std::span<const Complex> spectrum) {
  if (spectrum.size() != bins()) {
    throw Error(ErrorKind::Alignment, "spectrum length mismatch");
  }
  auto* spec = static_cast<fftw_complex*>(spec_);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spec[k][0] = spectrum[k].real();
    spec[k][1] = spectrum[k].imag();
  }
  // c2r destroys its input; the buffer is refilled on every call.
  fftw_execute(static_cast<fftw_plan>(inv_));
  std::vector<double> out(real_, real_ + n_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<Complex> rfft(std::span<const double> x) {
  RealFft plan(x.size());
  return plan.forward(x);
}

std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n) {
  RealFft plan(n);
  return plan.inverse(spectrum);
}

}  // namespace rppg::fft
