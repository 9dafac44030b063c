#include "fft.hpp"

#include <algorithm>
#include <new>

namespace resvc::detail {

RealFft::RealFft(std::size_t n)
    : n_(n),
      in_(fftw_alloc_real(n)),
      out_(fftw_alloc_complex(n / 2 + 1)),
      plan_(nullptr),
      inverse_plan_(nullptr) {
  if (in_ == nullptr || out_ == nullptr) {
    fftw_free(in_);
    fftw_free(out_);
    throw std::bad_alloc();
  }
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), out_, in_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  if (plan_ != nullptr) fftw_destroy_plan(plan_);
  if (inverse_plan_ != nullptr) fftw_destroy_plan(inverse_plan_);
  fftw_free(in_);
  fftw_free(out_);
}

void RealFft::forward(std::span<const double> input, std::vector<std::complex<double>>& output) {
  std::copy(input.begin(), input.end(), in_);
  fftw_execute(plan_);
  output.resize(n_ / 2 + 1);
  for (std::size_t k = 0; k < output.size(); ++k) output[k] = {out_[k][0], out_[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> spectrum, std::vector<double>& output) {
  for (std::size_t k = 0; k < n_ / 2 + 1; ++k) {
    out_[k][0] = spectrum[k].real();
    out_[k][1] = spectrum[k].imag();
  }
  fftw_execute(inverse_plan_);
  output.assign(in_, in_ + n_);
}

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x, bool inverse) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> y(n);
  if (n == 0) return y;
  auto* in = fftw_alloc_complex(n);
  auto* out = fftw_alloc_complex(n);
  if (in == nullptr || out == nullptr) {
    fftw_free(in);
    fftw_free(out);
    throw std::bad_alloc();
  }
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out,
                                    inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < n; ++i) y[i] = {out[i][0], out[i][1]};
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return y;
}

}  // namespace resvc::detail
