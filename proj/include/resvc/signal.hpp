#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace resvc {

// Mono time-domain signal. Amplitudes use the 16-bit PCM scale, so full
// scale is +/-32768.0. Immutable once constructed.
class Waveform {
 public:
  Waveform() = default;

  // Throws ConfigError on a non-positive rate or non-finite samples.
  Waveform(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& data() const noexcept { return samples_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double operator[](std::size_t n) const { return samples_[n]; }

  double duration_s() const noexcept {
    return sample_rate_ > 0 ? static_cast<double>(samples_.size()) / sample_rate_ : 0.0;
  }

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 1;
};

// RIFF/WAVE, PCM, 16 bit, mono. Throws FormatError naming the offending field.
Waveform read_wav(const std::filesystem::path& path);

// Samples are rounded half-to-even and clamped to the int16 range.
void write_wav(const Waveform& w, const std::filesystem::path& path);

// Sum of squared samples.
double power(std::span<const double> x);
inline double power(const Waveform& w) { return power(w.samples()); }

// Scales y so that power(result) == power(reference).
// Throws DegenerateSignalError when power(y) is zero.
Waveform match_power(const Waveform& y, const Waveform& reference);

// Returns a copy of w with every sample multiplied by gain.
Waveform scale(const Waveform& w, double gain);

// Number of whole samples in a duration, rounded to nearest.
std::size_t seconds_to_samples(double seconds, int sample_rate);

// Hann window. The periodic form is used for overlap-add, the symmetric form
// for analysis frames.
std::vector<double> hann_window(std::size_t length, bool periodic = false);

// 10*log10(signal power / error power) between a reference and an estimate
// over their common length.
double snr_db(std::span<const double> reference, std::span<const double> estimate);

}  // namespace resvc
