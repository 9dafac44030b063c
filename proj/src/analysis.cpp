#include "resvc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "resvc/error.hpp"

namespace resvc {

namespace {

constexpr double kSpectralFloor = 1e-10;
constexpr std::size_t kWarpOversampling = 4;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t shift_in_samples(double frame_shift_s, int sample_rate) {
  const std::size_t shift = seconds_to_samples(frame_shift_s, sample_rate);
  if (shift == 0) {
    throw ConfigError("frame shift " + std::to_string(frame_shift_s) +
                      " s is shorter than one sample");
  }
  return shift;
}

}  // namespace

MelCepstrumSequence::MelCepstrumSequence(std::vector<double> coefficients, std::size_t dim,
                                         double alpha, double frame_shift_s, int sample_rate)
    : coeffs_(std::move(coefficients)),
      dim_(dim),
      alpha_(alpha),
      frame_shift_s_(frame_shift_s),
      sample_rate_(sample_rate) {
  if (dim_ < 2) throw ConfigError("mel-cepstrum order must be at least 1");
  if (coeffs_.size() % dim_ != 0) {
    throw ConfigError("coefficient count " + std::to_string(coeffs_.size()) +
                      " is not a multiple of dimension " + std::to_string(dim_));
  }
  if (!(alpha_ >= 0.0 && alpha_ < 1.0)) {
    throw ConfigError("alpha must lie in [0, 1), got " + std::to_string(alpha_));
  }
  if (!(frame_shift_s_ > 0.0)) throw ConfigError("frame shift must be positive");
  if (sample_rate_ <= 0) throw ConfigError("sample rate must be positive");
}

std::size_t MelCepstrumSequence::shift_samples() const noexcept {
  return std::max<std::size_t>(1, seconds_to_samples(frame_shift_s_, sample_rate_));
}

std::size_t F0Contour::voiced_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double f) { return f > 0.0; }));
}

double warp_frequency(double omega, double alpha) {
  return omega + 2.0 * std::atan2(alpha * std::sin(omega), 1.0 - alpha * std::cos(omega));
}

std::vector<double> mcep_to_log_spectrum(std::span<const double> frame, double alpha,
                                         std::size_t n_bins) {
  if (n_bins < 2) throw ConfigError("mcep_to_log_spectrum needs at least 2 bins");
  std::vector<double> out(n_bins, 0.0);
  for (std::size_t i = 0; i < n_bins; ++i) {
    const double omega = std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_bins - 1);
    const double beta = warp_frequency(omega, alpha);
    double acc = 0.0;
    for (std::size_t k = 0; k < frame.size(); ++k) acc += frame[k] * std::cos(k * beta);
    out[i] = acc;
  }
  return out;
}

MelCepstrumSequence extract_mcep(const Waveform& w, const McepOptions& opt) {
  const std::size_t n = opt.frame_length;
  if (opt.order < 1) throw ConfigError("mcep order must be at least 1");
  if (!is_power_of_two(n) || n < 64) {
    throw ConfigError("frame length must be a power of two >= 64, got " + std::to_string(n));
  }
  if (!(opt.alpha >= 0.0 && opt.alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
  const std::size_t shift = shift_in_samples(opt.frame_shift_s, w.sample_rate());
  if (w.size() < n) {
    throw InsufficientDataError("signal of " + std::to_string(w.size()) +
                                " samples is shorter than one analysis frame (" +
                                std::to_string(n) + ")");
  }

  const std::size_t frames = (w.size() - n) / shift + 1;
  const std::size_t dim = opt.order + 1;
  const std::size_t half = n / 2;
  const std::size_t grid = kWarpOversampling * half;  // warped-axis intervals

  std::vector<double> window = hann_window(n);
  const double window_norm = std::sqrt(power(window));
  for (double& v : window) v /= window_norm;

  // Linear-interpolation taps from the warped grid back onto FFT bins.
  std::vector<std::size_t> tap(grid + 1);
  std::vector<double> frac(grid + 1);
  for (std::size_t j = 0; j <= grid; ++j) {
    const double beta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
    const double omega = std::clamp(warp_frequency(beta, -opt.alpha), 0.0, std::numbers::pi);
    const double pos = omega / std::numbers::pi * static_cast<double>(half);
    const auto i0 = std::min(static_cast<std::size_t>(pos), half - 1);
    tap[j] = i0;
    frac[j] = pos - static_cast<double>(i0);
  }

  // Trapezoid weights of the even-symmetric inverse DFT, including the
  // one-sided doubling of c_1..c_M.
  std::vector<double> basis(dim * (grid + 1));
  for (std::size_t k = 0; k < dim; ++k) {
    const double scale = (k == 0 ? 1.0 : 2.0) / static_cast<double>(grid);
    for (std::size_t j = 0; j <= grid; ++j) {
      const double edge = (j == 0 || j == grid) ? 0.5 : 1.0;
      basis[k * (grid + 1) + j] =
          scale * edge *
          std::cos(std::numbers::pi * static_cast<double>(k * j) / static_cast<double>(grid));
    }
  }

  detail::RealFft fft(n);
  std::vector<double> buf(n);
  std::vector<std::complex<double>> spec;
  std::vector<double> log_mag(half + 1);
  std::vector<double> warped(grid + 1);
  std::vector<double> coeffs(frames * dim);

  const auto x = w.samples();
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * shift;
    for (std::size_t i = 0; i < n; ++i) buf[i] = x[start + i] * window[i];
    fft.forward(buf, spec);
    for (std::size_t k = 0; k <= half; ++k) {
      log_mag[k] = std::log(std::max(std::abs(spec[k]), kSpectralFloor));
    }
    for (std::size_t j = 0; j <= grid; ++j) {
      warped[j] = (1.0 - frac[j]) * log_mag[tap[j]] + frac[j] * log_mag[tap[j] + 1];
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const double* b = &basis[k * (grid + 1)];
      double acc = 0.0;
      for (std::size_t j = 0; j <= grid; ++j) acc += b[j] * warped[j];
      coeffs[t * dim + k] = acc;
    }
  }
  return MelCepstrumSequence(std::move(coeffs), dim, opt.alpha, opt.frame_shift_s,
                             w.sample_rate());
}

std::size_t aligned_frame_count(std::size_t signal_length, std::size_t shift_samples) {
  return signal_length / shift_samples + 1;
}

MelCepstrumSequence extract_aligned_mcep(const Waveform& w, const McepOptions& opt) {
  if (w.empty()) throw InsufficientDataError("cannot analyse an empty signal");
  const std::size_t pad = opt.frame_length / 2;
  std::vector<double> padded(w.size() + 2 * pad, 0.0);
  std::copy(w.samples().begin(), w.samples().end(), padded.begin() + static_cast<long>(pad));
  return extract_mcep(Waveform(std::move(padded), w.sample_rate()), opt);
}

F0Contour estimate_f0(const Waveform& w, const F0Options& opt) {
  const double rate = w.sample_rate();
  if (!(opt.fmin > 0.0 && opt.fmin < opt.fmax)) {
    throw ConfigError("F0 search range requires 0 < fmin < fmax");
  }
  if (!(opt.fmax < rate / 4.0)) {
    throw ConfigError("fmax must stay below half the Nyquist frequency");
  }
  const std::size_t shift = shift_in_samples(opt.frame_shift_s, w.sample_rate());
  const std::size_t len = std::max<std::size_t>(seconds_to_samples(opt.window_s, w.sample_rate()), 3);
  const auto lag_min = static_cast<std::size_t>(std::floor(rate / opt.fmax));
  const auto lag_max = static_cast<std::size_t>(std::ceil(rate / opt.fmin));
  if (lag_max + 2 >= len) {
    throw ConfigError("analysis window too short for fmin " + std::to_string(opt.fmin) + " Hz");
  }

  std::size_t nfft = 1;
  while (nfft < 2 * len) nfft <<= 1;
  detail::RealFft fft(nfft);

  const std::vector<double> window = hann_window(len);
  std::vector<double> buf(nfft, 0.0);
  std::vector<std::complex<double>> spec;
  std::vector<double> acf;

  // Autocorrelation of the window itself; dividing by it undoes the taper.
  std::copy(window.begin(), window.end(), buf.begin());
  fft.forward(buf, spec);
  for (auto& s : spec) s = std::norm(s);
  std::vector<double> window_acf;
  fft.inverse(spec, window_acf);
  const double window_r0 = window_acf[0];

  const auto x = w.samples();
  F0Contour out;
  out.frame_shift_s = opt.frame_shift_s;
  const std::size_t frames = aligned_frame_count(w.size(), shift);
  out.values.assign(frames, 0.0);
  std::vector<double> norm_acf(lag_max + 2, 0.0);

  for (std::size_t t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t * shift) - static_cast<long>(len / 2);
    std::fill(buf.begin(), buf.end(), 0.0);
    double mean = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const long idx = start + static_cast<long>(i);
      if (idx >= 0 && idx < static_cast<long>(x.size())) mean += x[static_cast<std::size_t>(idx)];
    }
    mean /= static_cast<double>(len);
    double energy = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const long idx = start + static_cast<long>(i);
      const double s =
          (idx >= 0 && idx < static_cast<long>(x.size())) ? x[static_cast<std::size_t>(idx)] - mean : 0.0;
      buf[i] = s * window[i];
      energy += buf[i] * buf[i];
    }
    if (energy <= 1e-9) continue;

    fft.forward(buf, spec);
    for (auto& s : spec) s = std::norm(s);
    fft.inverse(spec, acf);
    const double r0 = acf[0];
    for (std::size_t lag = lag_min; lag <= lag_max + 1; ++lag) {
      norm_acf[lag] = (acf[lag] / r0) / (window_acf[lag] / window_r0);
    }

    double best = -1.0;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) best = std::max(best, norm_acf[lag]);
    if (best < opt.voicing_threshold) continue;

    // Earliest local maximum close to the global one avoids octave-down errors.
    std::size_t pick = 0;
    for (std::size_t lag = std::max<std::size_t>(lag_min, 1); lag <= lag_max; ++lag) {
      const bool peak = norm_acf[lag] >= norm_acf[lag - 1] && norm_acf[lag] >= norm_acf[lag + 1];
      if (peak && norm_acf[lag] >= 0.9 * best) {
        pick = lag;
        break;
      }
    }
    if (pick == 0) continue;

    double lag = static_cast<double>(pick);
    const double a = norm_acf[pick - 1];
    const double b = norm_acf[pick];
    const double c = norm_acf[pick + 1];
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) lag += 0.5 * (a - c) / denom;
    const double f0 = rate / lag;
    if (f0 >= opt.fmin && f0 <= opt.fmax) out.values[t] = f0;
  }
  return out;
}

MelCepstrumSequence interpolate_frames(const MelCepstrumSequence& m,
                                       std::size_t target_frame_count) {
  const std::size_t src = m.frame_count();
  if (src < 2 || target_frame_count < 2) {
    throw InsufficientDataError("frame interpolation needs at least 2 source and 2 target frames");
  }
  if (src == target_frame_count) return m;

  const std::size_t dim = m.dim();
  std::vector<double> out(target_frame_count * dim);
  const double step = static_cast<double>(src - 1) / static_cast<double>(target_frame_count - 1);
  for (std::size_t j = 0; j < target_frame_count; ++j) {
    std::size_t i0;
    double frac;
    if (j == target_frame_count - 1) {
      i0 = src - 2;
      frac = 1.0;
    } else {
      const double pos = static_cast<double>(j) * step;
      i0 = std::min(static_cast<std::size_t>(pos), src - 2);
      frac = pos - static_cast<double>(i0);
    }
    const auto a = m.frame(i0);
    const auto b = m.frame(i0 + 1);
    for (std::size_t d = 0; d < dim; ++d) {
      out[j * dim + d] = frac == 0.0 ? a[d] : frac == 1.0 ? b[d] : a[d] + frac * (b[d] - a[d]);
    }
  }
  return m.with_coefficients(std::move(out));
}

F0Contour resample_f0(const F0Contour& f0, std::size_t target_frame_count) {
  F0Contour out;
  out.frame_shift_s = f0.frame_shift_s;
  out.values.assign(target_frame_count, 0.0);
  if (f0.values.empty() || target_frame_count == 0) return out;
  if (target_frame_count == 1) {
    out.values[0] = f0.values.front();
    return out;
  }
  const double step =
      static_cast<double>(f0.values.size() - 1) / static_cast<double>(target_frame_count - 1);
  for (std::size_t j = 0; j < target_frame_count; ++j) {
    const auto src = static_cast<std::size_t>(std::lround(static_cast<double>(j) * step));
    out.values[j] = f0.values[std::min(src, f0.values.size() - 1)];
  }
  return out;
}

}  // namespace resvc
