#pragma once

// Signal generators and independent reference computations for the tests.
// Nothing here calls into the library's DSP code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace resvc::testing {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> sine(double freq, double amplitude, std::size_t n, int rate,
                                double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * kPi * freq * static_cast<double>(i) / rate + phase);
  }
  return x;
}

inline std::vector<double> white_noise(std::size_t n, double stddev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

// Impulse train, unit-height pulses at the given fundamental.
inline std::vector<double> pulse_train(double f0, std::size_t n, int rate) {
  std::vector<double> x(n, 0.0);
  double phase = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (phase >= 1.0) {
      x[i] = 1.0;
      phase -= 1.0;
    }
    phase += f0 / rate;
  }
  return x;
}

// Two-pole resonator cascade; formant centre frequencies may glide linearly
// from `from` to `to` over the signal.
inline std::vector<double> formant_filter(std::span<const double> x, int rate,
                                          std::vector<double> from, std::vector<double> to,
                                          std::vector<double> bandwidths) {
  std::vector<double> y(x.begin(), x.end());
  const std::size_t n = x.size();
  for (std::size_t f = 0; f < from.size(); ++f) {
    double y1 = 0.0, y2 = 0.0;
    const double r = std::exp(-kPi * bandwidths[f] / rate);
    for (std::size_t i = 0; i < n; ++i) {
      const double pos = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      const double fc = from[f] + (to[f] - from[f]) * pos;
      const double a1 = 2.0 * r * std::cos(2.0 * kPi * fc / rate);
      const double a2 = -r * r;
      const double g = 1.0 - r;  // rough unity-ish gain
      const double out = g * y[i] + a1 * y1 + a2 * y2;
      y2 = y1;
      y1 = out;
      y[i] = out;
    }
  }
  return y;
}

// Pulse-excited formant signal with a little aspiration noise, peak-normalized,
// over a recording noise floor 54 dB below the peak.
inline std::vector<double> speech_like(double f0, double seconds, int rate, std::uint64_t seed,
                                       double peak = 8000.0, bool gliding = true) {
  const auto n = static_cast<std::size_t>(seconds * rate);
  auto exc = pulse_train(f0, n, rate);
  const auto noise = white_noise(n, 0.02, seed);
  for (std::size_t i = 0; i < n; ++i) exc[i] += noise[i];
  std::vector<double> from{600.0, 1400.0, 2600.0};
  std::vector<double> to = gliding ? std::vector<double>{450.0, 1800.0, 2400.0} : from;
  auto y = formant_filter(exc, rate, from, to, {90.0, 120.0, 180.0});
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  const auto hiss = white_noise(n, 0.002 * peak, seed + 1);
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] * peak / m + hiss[i];
  return y;
}

// O(n^2) DFT, the textbook definition.
inline std::vector<cplx> naive_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = -2.0 * kPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
      acc += x[i] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

// Recursive radix-2 FFT; size must be a power of two.
inline void fft_inplace(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  std::vector<cplx> even(n / 2), odd(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    even[i] = a[2 * i];
    odd[i] = a[2 * i + 1];
  }
  fft_inplace(even);
  fft_inplace(odd);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const cplx t = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n)) * odd[k];
    a[k] = even[k] + t;
    a[k + n / 2] = even[k] - t;
  }
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Zero-padded magnitude spectrum of a Hann-windowed signal; bin spacing rate/nfft.
inline std::vector<double> magnitude_spectrum(std::span<const double> x, std::size_t nfft) {
  std::vector<cplx> buf(nfft, 0.0);
  const std::size_t n = std::min(x.size(), nfft);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
    buf[i] = x[i] * w;
  }
  fft_inplace(buf);
  std::vector<double> mag(nfft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

// Frequency of the largest spectral peak inside [lo, hi] Hz.
inline double dominant_frequency(std::span<const double> x, int rate, double lo, double hi) {
  const std::size_t nfft = std::max<std::size_t>(next_pow2(x.size()) * 4, 1 << 16);
  const auto mag = magnitude_spectrum(x, nfft);
  const double bin_hz = static_cast<double>(rate) / static_cast<double>(nfft);
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t k = static_cast<std::size_t>(lo / bin_hz);
       k <= static_cast<std::size_t>(hi / bin_hz) && k < mag.size(); ++k) {
    if (mag[k] > best_v) {
      best_v = mag[k];
      best = k;
    }
  }
  return static_cast<double>(best) * bin_hz;
}

// Fundamental by harmonic averaging: each candidate scores the mean spectral
// magnitude at its multiples below band_hz. A true fundamental and its
// multiples score alike, subharmonics about half, so the lowest candidate
// near the best score wins.
inline double fundamental_frequency(std::span<const double> x, int rate, double lo, double hi,
                                    double band_hz = 3000.0) {
  const std::size_t nfft = std::max<std::size_t>(next_pow2(x.size()) * 2, 1 << 16);
  const auto mag = magnitude_spectrum(x, nfft);
  const double bin_hz = static_cast<double>(rate) / static_cast<double>(nfft);
  std::vector<double> freqs, scores;
  for (double f = lo; f <= hi; f += 0.25) {
    double score = 0.0;
    int count = 0;
    for (int h = 1; h * f <= band_hz; ++h) {
      const auto k = static_cast<std::size_t>(std::lround(h * f / bin_hz));
      if (k >= mag.size()) break;
      // peak within +-1 bin tolerates the grid
      double m = mag[k];
      if (k > 0) m = std::max(m, mag[k - 1]);
      if (k + 1 < mag.size()) m = std::max(m, mag[k + 1]);
      score += m;
      ++count;
    }
    freqs.push_back(f);
    scores.push_back(count ? score / count : 0.0);
  }
  const double best = *std::max_element(scores.begin(), scores.end());
  std::size_t i = 0;
  while (scores[i] < 0.8 * best) ++i;
  // climb to the local maximum of this lobe
  while (i + 1 < scores.size() && scores[i + 1] >= scores[i]) ++i;
  return freqs[i];
}

// Power within [lo, hi) Hz of the Welch-averaged periodogram.
inline double band_power(std::span<const double> x, int rate, double lo, double hi,
                         std::size_t nfft = 1024) {
  double acc = 0.0;
  std::size_t frames = 0;
  for (std::size_t start = 0; start + nfft <= x.size(); start += nfft / 2) {
    const auto mag = magnitude_spectrum(x.subspan(start, nfft), nfft);
    for (std::size_t k = 0; k < mag.size(); ++k) {
      const double f = static_cast<double>(k) * rate / static_cast<double>(nfft);
      if (f >= lo && f < hi) acc += mag[k] * mag[k];
    }
    ++frames;
  }
  return frames ? acc / static_cast<double>(frames) : 0.0;
}

// Log envelope of a mel-cepstrum on `bins` uniform frequencies in [0, pi],
// summed directly on the all-pass warped axis.
inline std::vector<double> warped_cosine_envelope(std::span<const double> c, double alpha,
                                                  std::size_t bins) {
  std::vector<double> env(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double omega = kPi * static_cast<double>(i) / static_cast<double>(bins - 1);
    const double beta = omega + 2.0 * std::atan2(alpha * std::sin(omega), 1.0 - alpha * std::cos(omega));
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * std::cos(static_cast<double>(k) * beta);
    env[i] = acc;
  }
  return env;
}

// Zero-phase FIR filtering by FFT overlap-add. `log_mag` holds the log
// magnitude response on nfft/2 + 1 uniform bins in [0, pi].
inline std::vector<double> ola_filter(std::span<const double> x, std::span<const double> log_mag) {
  const std::size_t taps = 2 * (log_mag.size() - 1);
  std::vector<cplx> h(taps);
  for (std::size_t k = 0; k < taps; ++k) {
    const std::size_t kk = k <= taps / 2 ? k : taps - k;
    h[k] = std::exp(log_mag[kk]);
  }
  // inverse DFT through the forward transform of the conjugate
  for (auto& v : h) v = std::conj(v);
  fft_inplace(h);
  // centre the impulse response at taps/2
  std::vector<double> fir(taps);
  for (std::size_t i = 0; i < taps; ++i) fir[i] = h[(i + taps / 2) % taps].real() / static_cast<double>(taps);

  const std::size_t block = taps;
  const std::size_t nfft = 2 * taps;
  std::vector<cplx> hf(nfft, 0.0);
  for (std::size_t i = 0; i < taps; ++i) hf[i] = fir[i];
  fft_inplace(hf);
  std::vector<double> full(x.size() + nfft, 0.0);
  for (std::size_t start = 0; start < x.size(); start += block) {
    std::vector<cplx> buf(nfft, 0.0);
    for (std::size_t i = 0; i < block && start + i < x.size(); ++i) buf[i] = x[start + i];
    fft_inplace(buf);
    for (std::size_t k = 0; k < nfft; ++k) buf[k] = std::conj(buf[k] * hf[k]);
    fft_inplace(buf);
    for (std::size_t i = 0; i < nfft; ++i) full[start + i] += buf[i].real() / static_cast<double>(nfft);
  }
  return {full.begin() + static_cast<long>(taps / 2), full.begin() + static_cast<long>(taps / 2 + x.size())};
}

// Welch power spectrum in dB, Hann frames of nfft with 50% overlap.
inline std::vector<double> welch_db(std::span<const double> x, std::size_t nfft) {
  std::vector<double> acc(nfft / 2 + 1, 0.0);
  std::size_t frames = 0;
  for (std::size_t start = 0; start + nfft <= x.size(); start += nfft / 2) {
    const auto mag = magnitude_spectrum(x.subspan(start, nfft), nfft);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += mag[k] * mag[k];
    ++frames;
  }
  for (double& v : acc) v = 10.0 * std::log10(v / static_cast<double>(frames) + 1e-300);
  return acc;
}

inline double snr(std::span<const double> ref, std::span<const double> est) {
  double s = 0.0, e = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    s += ref[i] * ref[i];
    e += (ref[i] - est[i]) * (ref[i] - est[i]);
  }
  return 10.0 * std::log10(s / std::max(e, 1e-300));
}

inline double sum_squares(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

inline double rms_db_difference(std::span<const double> a_db, std::span<const double> b_db) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a_db.size(); ++i) acc += (a_db[i] - b_db[i]) * (a_db[i] - b_db[i]);
  return std::sqrt(acc / static_cast<double>(a_db.size()));
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace resvc::testing
