#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resvc/analysis.hpp"
#include "resvc/signal.hpp"

namespace resvc {

// Largest log-transfer magnitude either Pade stage is trusted with. Frames
// beyond it have c_1..c_M scaled back to the bound and are reported.
inline constexpr double kPadeValidityBound = 6.0;

// Converts mel-cepstral coefficients to MLSA filter coefficients b.
std::vector<double> mcep_to_filter_coefficients(std::span<const double> mcep, double alpha);

// Mel log spectrum approximation filter realizing exp(sum_k c_k z~^-k) with a
// modified Pade approximant of the exponential. Single-owner mutable state;
// output at sample n depends only on inputs up to n.
class MlsaFilter {
 public:
  // pade_order must be 4 or 5.
  MlsaFilter(std::size_t order, double alpha, int pade_order = 5);

  void reset();

  // Filters one sample with filter coefficients b (b.size() == order + 1),
  // including the exp(b_0) gain.
  double process(double x, std::span<const double> b);

  std::size_t order() const noexcept { return order_; }
  double alpha() const noexcept { return alpha_; }
  int pade_order() const noexcept { return pade_order_; }
  std::span<const double> state() const noexcept { return delay_; }

 private:
  double first_stage(double x, double b1);
  double second_stage(double x, std::span<const double> b);
  double fir(double x, std::span<const double> b, double* d) const;

  std::size_t order_;
  double alpha_;
  int pade_order_;
  std::span<const double> pade_;
  std::vector<double> delay_;
};

// Time-varying MLSA filtering. Frame t of m applies at sample t*shift;
// coefficients are interpolated linearly between frames and held after the
// last one. Output length equals input length. Throws AlignmentError when
// |len - T*shift| exceeds one frame shift. Frames beyond the Pade bound are
// scaled back and described in *warnings when given.
Waveform synthesis_filter(const Waveform& excitation, const MelCepstrumSequence& m,
                          std::vector<std::string>* warnings = nullptr);

// Same filter with negated coefficients; synthesis_filter undoes it.
Waveform inverse_filter(const Waveform& signal, const MelCepstrumSequence& m,
                        std::vector<std::string>* warnings = nullptr);

// Pulse/noise excitation (unit-power pulses at rate/F0 in voiced frames,
// unit-variance Gaussian noise in unvoiced ones) shaped by synthesis_filter.
// Output length is T*shift. f0 must have m.frame_count() frames.
Waveform reference_vocoder(const MelCepstrumSequence& m, const F0Contour& f0, int sample_rate,
                           std::uint64_t seed = 1, std::vector<std::string>* warnings = nullptr);

}  // namespace resvc
