#pragma once

// Thin RAII wrappers over FFTW. Internal to the library.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace resvc::detail {

// Forward real-to-complex transform of a fixed length; returns n/2+1 bins.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  // input.size() must equal size(); output gets n/2+1 bins.
  void forward(std::span<const double> input, std::vector<std::complex<double>>& output);

  // Unnormalized inverse of forward(): spectrum has n/2+1 bins, output n samples.
  void inverse(std::span<const std::complex<double>> spectrum, std::vector<double>& output);

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
  fftw_plan inverse_plan_;
};

// Unnormalized complex DFT (sign -1 forward, +1 inverse).
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool inverse);

}  // namespace resvc::detail
