#include "resvc/collapse.hpp"

#include <algorithm>
#include <complex>
#include <string>

#include "fft.hpp"
#include "resvc/error.hpp"

namespace resvc {

EnvelopeSignal extract_envelope(const Waveform& w, std::size_t slot_length) {
  if (slot_length < 8) throw ConfigError("slot length must be at least 8 samples");
  if (w.empty()) throw InsufficientDataError("cannot take the envelope of an empty signal");
  const std::size_t n = w.size();

  std::vector<std::complex<double>> x(w.samples().begin(), w.samples().end());
  auto spec = detail::dft(x, false);
  // Analytic signal: keep DC (and Nyquist for even n), double positive bins.
  const std::size_t positive_end = (n + 1) / 2;
  for (std::size_t k = 1; k < positive_end; ++k) spec[k] *= 2.0;
  for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
  const auto analytic = detail::dft(spec, true);

  std::vector<double> pooled(n);
  for (std::size_t start = 0; start < n; start += slot_length) {
    const std::size_t end = std::min(n, start + slot_length);
    double peak = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      peak = std::max(peak, std::abs(analytic[i]) / static_cast<double>(n));
    }
    std::fill(pooled.begin() + static_cast<long>(start), pooled.begin() + static_cast<long>(end),
              peak);
  }

  // Centred moving average; near the edges it averages what is available.
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + pooled[i];
  EnvelopeSignal env;
  env.slot_length = slot_length;
  env.sample_rate = w.sample_rate();
  env.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= slot_length ? i - slot_length : 0;
    const std::size_t hi = std::min(n, i + slot_length + 1);
    env.values[i] = std::max(0.0, (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo));
  }
  return env;
}

std::set<std::size_t> detect_collapsed_frames(const EnvelopeSignal& env_ref,
                                              const EnvelopeSignal& env_test, double threshold,
                                              std::size_t frame_shift_samples,
                                              std::size_t frame_count) {
  if (!(threshold > 0.0)) throw ConfigError("collapse threshold must be positive");
  if (frame_shift_samples == 0) throw ConfigError("frame shift must be positive");
  const std::size_t a = env_ref.size();
  const std::size_t b = env_test.size();
  const std::size_t slot = std::max(env_ref.slot_length, env_test.slot_length);
  if ((a > b ? a - b : b - a) > slot) {
    throw AlignmentError("envelope lengths " + std::to_string(a) + " and " + std::to_string(b) +
                         " differ by more than one slot");
  }
  const std::size_t n = std::min(a, b);
  std::set<std::size_t> flagged;
  for (std::size_t i = 0; i < n; ++i) {
    if (env_test.values[i] - env_ref.values[i] > threshold) {
      const std::size_t t = i / frame_shift_samples;
      if (t < frame_count) flagged.insert(t);
    }
  }
  return flagged;
}

MelCepstrumSequence substitute_features(const MelCepstrumSequence& postfiltered,
                                        const MelCepstrumSequence& plain,
                                        const std::set<std::size_t>& flagged) {
  if (!postfiltered.same_shape(plain)) {
    throw AlignmentError("feature sequences differ in shape: " +
                         std::to_string(postfiltered.frame_count()) + "x" +
                         std::to_string(postfiltered.dim()) + " vs " +
                         std::to_string(plain.frame_count()) + "x" + std::to_string(plain.dim()));
  }
  if (postfiltered.alpha() != plain.alpha() || postfiltered.frame_shift_s() != plain.frame_shift_s()) {
    throw AlignmentError("feature sequences differ in alpha or frame shift");
  }
  std::vector<double> out(postfiltered.coefficients());
  const std::size_t dim = postfiltered.dim();
  for (std::size_t t : flagged) {
    if (t >= postfiltered.frame_count()) continue;
    const auto src = plain.frame(t);
    std::copy(src.begin(), src.end(), out.begin() + static_cast<long>(t * dim));
  }
  return postfiltered.with_coefficients(std::move(out));
}

}  // namespace resvc
