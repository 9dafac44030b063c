#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resvc/analysis.hpp"

namespace resvc {

// Per-speaker statistics gathered from training utterances.
struct SpeakerStats {
  double logf0_mean = 0.0;
  double logf0_var = 0.0;
  std::vector<double> mcep_mean;  // M+1 entries, pooled over all frames
  std::vector<double> mcep_var;
  // Mean over utterances of the within-utterance variance of each dimension.
  // Entry 0 is kept for layout but never used by the postfilter.
  std::vector<double> gv;

  std::size_t dim() const noexcept { return mcep_mean.size(); }

  // Throws StatisticsError if vector sizes disagree, a variance is negative
  // or non-finite, or a GV entry for dimensions 1..M is not positive.
  void validate() const;
};

// Maps normal (not F0-transformed) source features to target features.
// Implementations keep the frame count, order, alpha and frame shift, and
// pass dimension 0 through unchanged.
class SpectralConverter {
 public:
  virtual ~SpectralConverter() = default;
  virtual MelCepstrumSequence convert(const MelCepstrumSequence& source) const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<SpectralConverter> identity_converter();

// Per-dimension affine mapping from source to target mean and variance for
// dimensions 1..M. Throws StatisticsError naming the first dimension whose
// source variance is not strictly positive.
std::unique_ptr<SpectralConverter> mean_variance_converter(const SpeakerStats& source,
                                                           const SpeakerStats& target);

// Uses features computed by some outside model. The stored sequence is
// linearly re-timed to the input's frame count and its dimension 0 is
// replaced by the input's; the order must match.
std::unique_ptr<SpectralConverter> external_converter(MelCepstrumSequence converted);

// Variance-restoring postfilter: rescales every dimension 1..M about its
// utterance mean so its variance equals target_gv[d]. Constant tracks are left
// alone and reported in *warnings. Throws InsufficientDataError for fewer than
// two frames and ConfigError for a non-positive target.
MelCepstrumSequence gv_postfilter(const MelCepstrumSequence& m, std::span<const double> target_gv,
                                  std::vector<std::string>* warnings = nullptr);

// Pools statistics over utterances. Throws StatisticsError with fewer than
// ten voiced frames in total, on an empty list, or on mismatched orders.
SpeakerStats collect_stats(
    std::span<const std::pair<MelCepstrumSequence, F0Contour>> utterances);

// Log-domain mean/variance F0 conversion of voiced frames; unvoiced frames
// stay 0. When the source log-F0 variance is zero only the mean is shifted.
F0Contour convert_f0(const F0Contour& f0, const SpeakerStats& source, const SpeakerStats& target);

}  // namespace resvc
