#include "resvc/convert.hpp"

#include <cmath>

#include "resvc/error.hpp"

namespace resvc {

namespace {

class IdentityConverter final : public SpectralConverter {
 public:
  MelCepstrumSequence convert(const MelCepstrumSequence& source) const override { return source; }
  std::string name() const override { return "identity"; }
};

class MeanVarianceConverter final : public SpectralConverter {
 public:
  MeanVarianceConverter(std::vector<double> src_mean, std::vector<double> gain,
                        std::vector<double> tgt_mean)
      : src_mean_(std::move(src_mean)), gain_(std::move(gain)), tgt_mean_(std::move(tgt_mean)) {}

  MelCepstrumSequence convert(const MelCepstrumSequence& source) const override {
    const std::size_t dim = source.dim();
    if (dim != src_mean_.size()) {
      throw AlignmentError("features have dimension " + std::to_string(dim) +
                           ", statistics have " + std::to_string(src_mean_.size()));
    }
    std::vector<double> out(source.coefficients());
    for (std::size_t t = 0; t < source.frame_count(); ++t) {
      for (std::size_t d = 1; d < dim; ++d) {
        double& c = out[t * dim + d];
        c = (c - src_mean_[d]) * gain_[d] + tgt_mean_[d];
      }
    }
    return source.with_coefficients(std::move(out));
  }

  std::string name() const override { return "meanvar"; }

 private:
  std::vector<double> src_mean_;
  std::vector<double> gain_;
  std::vector<double> tgt_mean_;
};

class ExternalConverter final : public SpectralConverter {
 public:
  explicit ExternalConverter(MelCepstrumSequence features) : features_(std::move(features)) {}

  MelCepstrumSequence convert(const MelCepstrumSequence& source) const override {
    if (source.dim() != features_.dim()) {
      throw AlignmentError("external features have dimension " + std::to_string(features_.dim()) +
                           ", input has " + std::to_string(source.dim()));
    }
    MelCepstrumSequence timed = features_.frame_count() == source.frame_count()
                                    ? features_
                                    : interpolate_frames(features_, source.frame_count());
    std::vector<double> out(timed.coefficients());
    const std::size_t dim = source.dim();
    for (std::size_t t = 0; t < source.frame_count(); ++t) out[t * dim] = source.at(t, 0);
    return source.with_coefficients(std::move(out));
  }

  std::string name() const override { return "external"; }

 private:
  MelCepstrumSequence features_;
};

void check_nonnegative(std::span<const double> v, const char* what) {
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (!std::isfinite(v[d]) || v[d] < 0.0) {
      throw StatisticsError(std::string(what) + "[" + std::to_string(d) +
                            "] is negative or not finite");
    }
  }
}

}  // namespace

void SpeakerStats::validate() const {
  if (!std::isfinite(logf0_mean)) throw StatisticsError("logf0_mean is not finite");
  if (!std::isfinite(logf0_var) || logf0_var < 0.0) {
    throw StatisticsError("logf0_var is negative or not finite");
  }
  const std::size_t dim = mcep_mean.size();
  if (dim < 2) throw StatisticsError("mcep statistics need at least two dimensions");
  if (mcep_var.size() != dim || gv.size() != dim) {
    throw StatisticsError("mcep_mean, mcep_var and gv must have the same length");
  }
  for (std::size_t d = 0; d < dim; ++d) {
    if (!std::isfinite(mcep_mean[d])) {
      throw StatisticsError("mcep_mean[" + std::to_string(d) + "] is not finite");
    }
  }
  check_nonnegative(mcep_var, "mcep_var");
  check_nonnegative(gv, "gv");
  for (std::size_t d = 1; d < dim; ++d) {
    if (!(gv[d] > 0.0)) throw StatisticsError("gv[" + std::to_string(d) + "] must be positive");
  }
}

std::unique_ptr<SpectralConverter> identity_converter() {
  return std::make_unique<IdentityConverter>();
}

std::unique_ptr<SpectralConverter> mean_variance_converter(const SpeakerStats& source,
                                                           const SpeakerStats& target) {
  const std::size_t dim = source.mcep_mean.size();
  if (source.mcep_var.size() != dim || target.mcep_mean.size() != dim ||
      target.mcep_var.size() != dim) {
    throw StatisticsError("source and target statistics have different dimensions");
  }
  std::vector<double> gain(dim, 1.0);
  for (std::size_t d = 1; d < dim; ++d) {
    if (!(source.mcep_var[d] > 0.0)) {
      throw StatisticsError("source variance of dimension " + std::to_string(d) +
                            " is not positive");
    }
    gain[d] = std::sqrt(target.mcep_var[d] / source.mcep_var[d]);
  }
  return std::make_unique<MeanVarianceConverter>(source.mcep_mean, std::move(gain),
                                                 target.mcep_mean);
}

std::unique_ptr<SpectralConverter> external_converter(MelCepstrumSequence converted) {
  return std::make_unique<ExternalConverter>(std::move(converted));
}

MelCepstrumSequence gv_postfilter(const MelCepstrumSequence& m, std::span<const double> target_gv,
                                  std::vector<std::string>* warnings) {
  const std::size_t frames = m.frame_count();
  const std::size_t dim = m.dim();
  if (frames < 2) throw InsufficientDataError("GV postfilter needs at least two frames");
  if (target_gv.size() != dim) {
    throw AlignmentError("target GV has " + std::to_string(target_gv.size()) +
                         " entries, features have dimension " + std::to_string(dim));
  }
  std::vector<double> out(m.coefficients());
  for (std::size_t d = 1; d < dim; ++d) {
    if (!(target_gv[d] > 0.0)) {
      throw ConfigError("target GV of dimension " + std::to_string(d) + " must be positive");
    }
    double mean = 0.0;
    for (std::size_t t = 0; t < frames; ++t) mean += m.at(t, d);
    mean /= static_cast<double>(frames);
    double var = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
      const double e = m.at(t, d) - mean;
      var += e * e;
    }
    var /= static_cast<double>(frames);
    if (var == 0.0) {
      if (warnings != nullptr) {
        warnings->push_back("GV postfilter: dimension " + std::to_string(d) +
                            " is constant, left unchanged");
      }
      continue;
    }
    const double gain = std::sqrt(target_gv[d] / var);
    for (std::size_t t = 0; t < frames; ++t) {
      double& c = out[t * dim + d];
      c = gain * (c - mean) + mean;
    }
  }
  return m.with_coefficients(std::move(out));
}

SpeakerStats collect_stats(
    std::span<const std::pair<MelCepstrumSequence, F0Contour>> utterances) {
  if (utterances.empty()) throw StatisticsError("no utterances to collect statistics from");
  const std::size_t dim = utterances.front().first.dim();

  SpeakerStats s;
  s.mcep_mean.assign(dim, 0.0);
  s.mcep_var.assign(dim, 0.0);
  s.gv.assign(dim, 0.0);

  double lf_sum = 0.0;
  std::size_t voiced = 0;
  std::size_t total_frames = 0;
  for (const auto& [mcep, f0] : utterances) {
    if (mcep.dim() != dim) throw StatisticsError("utterances have different mcep orders");
    for (double f : f0.values) {
      if (f > 0.0) {
        const double l = std::log(f);
        lf_sum += l;
        ++voiced;
      }
    }
    total_frames += mcep.frame_count();
    for (std::size_t t = 0; t < mcep.frame_count(); ++t) {
      for (std::size_t d = 0; d < dim; ++d) s.mcep_mean[d] += mcep.at(t, d);
    }
  }
  if (voiced < 10) {
    throw StatisticsError("only " + std::to_string(voiced) + " voiced frames; need at least 10");
  }
  if (total_frames == 0) throw StatisticsError("utterances contain no frames");

  s.logf0_mean = lf_sum / static_cast<double>(voiced);
  // Second pass keeps the log-F0 variance exact for constant contours.
  double lf_var = 0.0;
  for (const auto& [mcep, f0] : utterances) {
    for (double f : f0.values) {
      if (f > 0.0) {
        const double e = std::log(f) - s.logf0_mean;
        lf_var += e * e;
      }
    }
  }
  s.logf0_var = lf_var / static_cast<double>(voiced);

  for (double& v : s.mcep_mean) v /= static_cast<double>(total_frames);

  std::size_t utts_with_frames = 0;
  for (const auto& [mcep, f0] : utterances) {
    const std::size_t frames = mcep.frame_count();
    if (frames == 0) continue;
    ++utts_with_frames;
    for (std::size_t d = 0; d < dim; ++d) {
      double mean = 0.0;
      for (std::size_t t = 0; t < frames; ++t) mean += mcep.at(t, d);
      mean /= static_cast<double>(frames);
      double var = 0.0;
      for (std::size_t t = 0; t < frames; ++t) {
        const double e = mcep.at(t, d) - mean;
        var += e * e;
        const double g = mcep.at(t, d) - s.mcep_mean[d];
        s.mcep_var[d] += g * g;
      }
      s.gv[d] += var / static_cast<double>(frames);
    }
  }
  for (double& v : s.mcep_var) v /= static_cast<double>(total_frames);
  for (double& v : s.gv) v /= static_cast<double>(utts_with_frames);

  s.validate();
  return s;
}

F0Contour convert_f0(const F0Contour& f0, const SpeakerStats& source, const SpeakerStats& target) {
  F0Contour out = f0;
  const double gain =
      source.logf0_var > 0.0 ? std::sqrt(target.logf0_var / source.logf0_var) : 1.0;
  for (double& f : out.values) {
    if (f > 0.0) f = std::exp((std::log(f) - source.logf0_mean) * gain + target.logf0_mean);
  }
  return out;
}

}  // namespace resvc
