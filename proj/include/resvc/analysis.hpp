#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "resvc/signal.hpp"

namespace resvc {

// T frames of mel-cepstral coefficients c_0..c_M, stored row-major.
class MelCepstrumSequence {
 public:
  MelCepstrumSequence() = default;

  // coefficients.size() must be a multiple of dim. Throws ConfigError when
  // dim < 2, alpha outside [0, 1), frame_shift_s <= 0 or sample_rate <= 0.
  MelCepstrumSequence(std::vector<double> coefficients, std::size_t dim, double alpha,
                      double frame_shift_s, int sample_rate);

  std::size_t frame_count() const noexcept { return dim_ == 0 ? 0 : coeffs_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t order() const noexcept { return dim_ - 1; }
  double alpha() const noexcept { return alpha_; }
  double frame_shift_s() const noexcept { return frame_shift_s_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t shift_samples() const noexcept;

  std::span<const double> frame(std::size_t t) const {
    return {coeffs_.data() + t * dim_, dim_};
  }
  double at(std::size_t t, std::size_t d) const { return coeffs_[t * dim_ + d]; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  // Same metadata, new coefficient matrix of the given frame count.
  MelCepstrumSequence with_coefficients(std::vector<double> coefficients) const {
    return {std::move(coefficients), dim_, alpha_, frame_shift_s_, sample_rate_};
  }

  bool same_shape(const MelCepstrumSequence& other) const noexcept {
    return dim_ == other.dim_ && frame_count() == other.frame_count();
  }

  friend bool operator==(const MelCepstrumSequence&, const MelCepstrumSequence&) = default;

 private:
  std::vector<double> coeffs_;
  std::size_t dim_ = 0;
  double alpha_ = 0.0;
  double frame_shift_s_ = 0.005;
  int sample_rate_ = 1;
};

// Per-frame F0 in Hz; 0.0 marks an unvoiced frame.
struct F0Contour {
  std::vector<double> values;
  double frame_shift_s = 0.005;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t voiced_count() const noexcept;
};

struct McepOptions {
  std::size_t order = 35;
  double alpha = 0.455;
  double frame_shift_s = 0.005;
  std::size_t frame_length = 1024;
};

// Frame t covers samples [t*shift, t*shift + frame_length); the frame count is
// floor((len - frame_length) / shift) + 1. Throws InsufficientDataError when
// the signal is shorter than one frame.
MelCepstrumSequence extract_mcep(const Waveform& w, const McepOptions& opt = {});

// Same analysis on a signal zero-padded by frame_length/2 at both ends, so
// frame t is centred on sample t*shift and the sequence spans the whole
// signal: floor(len / shift) + 1 frames. This is the timing the MLSA filters
// assume.
MelCepstrumSequence extract_aligned_mcep(const Waveform& w, const McepOptions& opt = {});

// Frame count extract_aligned_mcep produces for a signal of the given length.
std::size_t aligned_frame_count(std::size_t signal_length, std::size_t shift_samples);

// Phase of the first-order all-pass z^-1 -> (z^-1 - alpha)/(1 - alpha z^-1)
// at normalized angular frequency omega in [0, pi]. warp_frequency(., -alpha)
// is the inverse map.
double warp_frequency(double omega, double alpha);

// Natural-log magnitude of exp(sum_k c_k z~^-k) on n_bins frequencies evenly
// spaced over [0, Nyquist].
std::vector<double> mcep_to_log_spectrum(std::span<const double> frame, double alpha,
                                         std::size_t n_bins);

struct F0Options {
  double frame_shift_s = 0.005;
  double fmin = 60.0;
  double fmax = 500.0;
  double window_s = 0.040;
  double voicing_threshold = 0.3;
};

// Autocorrelation pitch tracker. Frame t is centred on sample t*shift;
// floor(len / shift) + 1 frames, matching extract_aligned_mcep.
F0Contour estimate_f0(const Waveform& w, const F0Options& opt = {});

// Linear interpolation of every coefficient track onto target_frame_count
// evenly spaced positions; the first and last frames are kept exactly.
MelCepstrumSequence interpolate_frames(const MelCepstrumSequence& m,
                                       std::size_t target_frame_count);

// Nearest-frame resampling of an F0 contour to a new frame count. Used to
// line an F0 track up with a feature sequence of a different length.
F0Contour resample_f0(const F0Contour& f0, std::size_t target_frame_count);

}  // namespace resvc
