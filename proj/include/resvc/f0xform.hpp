#pragma once

#include "resvc/signal.hpp"

namespace resvc {

// Constant pitch transformation factor, restricted to [0.25, 4].
class F0Ratio {
 public:
  static constexpr double kMin = 0.25;
  static constexpr double kMax = 4.0;

  // Throws ConfigError outside [kMin, kMax].
  explicit F0Ratio(double value);

  double value() const noexcept { return value_; }
  friend bool operator==(F0Ratio, F0Ratio) = default;

 private:
  double value_;
};

// exp(target - source) of mean log-F0 values. Throws StatisticsError on
// non-finite means, ConfigError when the ratio leaves the allowed range.
F0Ratio compute_f0_ratio(double source_logf0_mean, double target_logf0_mean);

struct WsolaOptions {
  double window_s = 0.025;
  double tolerance_s = 0.0075;
};

// Waveform-similarity overlap-add time-scale modification. Output duration is
// ratio * input duration (rounded to a sample); pitch is preserved. A ratio of
// exactly 1 returns the input unchanged. Throws InsufficientDataError when the
// input is shorter than four windows.
Waveform wsola(const Waveform& w, F0Ratio ratio, const WsolaOptions& opt = {});

// Inserts a zero after every sample and doubles the declared rate, mirroring
// the spectrum about the old Nyquist frequency.
Waveform zero_stuff(const Waveform& w);

// Windowed-sinc (Kaiser, beta 8) reader at read_rate input samples per output
// sample. Output has round(len / read_rate) samples at output_rate Hz. For
// read_rate > 1 the kernel band-limits to Nyquist / read_rate first.
Waveform resample_at(const Waveform& w, double read_rate, int output_rate);

// resample_at with the ratio as read rate, keeping the sample rate: a
// sinusoid at f comes out at ratio * f.
Waveform resample(const Waveform& w, F0Ratio ratio);

// res * sqrt(1 / ratio).
Waveform compensate_residual_power(const Waveform& res, F0Ratio ratio);

// Residual-domain F0 transformation. Ratios below 1 fold the spectrum by zero
// stuffing before resampling at 2 * ratio so the vacated high band is filled
// with a mirrored copy; ratios of 1 and above resample directly. The power
// compensation applies in both cases.
Waveform f0_transform_residual(const Waveform& res, F0Ratio ratio);

}  // namespace resvc
