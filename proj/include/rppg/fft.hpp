#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rppg::fft {

using Complex = std::complex<double>;

/// Real-to-complex transform plan of fixed length. Unnormalized forward,
/// 1/n-normalized inverse. Plans are created under a global lock; executing
/// a plan is thread-compatible (one plan per thread).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  std::vector<Complex> forward(std::span<const double> x);
  std::vector<double> inverse(std::span<const Complex> spectrum);

 private:
  std::size_t n_;
  double* real_ = nullptr;
  void* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* inv_ = nullptr;
};

std::vector<Complex> rfft(std::span<const double> x);
std::vector<double> irfft(std::span<const Complex> spectrum, std::size_t n);

/// Frequency of bin k for an n-point transform at `fps` samples/second.
inline double bin_frequency(std::size_t k, std::size_t n, double fps) {
  return static_cast<double>(k) * fps / static_cast<double>(n);
}

}  // namespace rppg::fft
