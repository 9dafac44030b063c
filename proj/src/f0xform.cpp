#include "resvc/f0xform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "resvc/error.hpp"

namespace resvc {

namespace {

constexpr double kKaiserBeta = 8.0;
constexpr double kSincZeroCrossings = 16.0;  // per side, i.e. 32 taps at unit cutoff

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

F0Ratio::F0Ratio(double value) : value_(value) {
  if (!(value >= kMin && value <= kMax)) {
    throw ConfigError("F0 ratio " + std::to_string(value) + " outside [" + std::to_string(kMin) +
                      ", " + std::to_string(kMax) + "]");
  }
}

F0Ratio compute_f0_ratio(double source_logf0_mean, double target_logf0_mean) {
  if (!std::isfinite(source_logf0_mean) || !std::isfinite(target_logf0_mean)) {
    throw StatisticsError("log-F0 means must be finite");
  }
  return F0Ratio(std::exp(target_logf0_mean - source_logf0_mean));
}

Waveform wsola(const Waveform& w, F0Ratio ratio, const WsolaOptions& opt) {
  const std::size_t win = std::max<std::size_t>(seconds_to_samples(opt.window_s, w.sample_rate()), 4);
  if (w.size() < 4 * win) {
    throw InsufficientDataError("WSOLA needs at least " + std::to_string(4 * win) +
                                " samples, got " + std::to_string(w.size()));
  }
  if (ratio.value() == 1.0) return w;

  const std::size_t hop = win / 2;
  const auto tol = static_cast<long>(seconds_to_samples(opt.tolerance_s, w.sample_rate()));
  const double analysis_hop = static_cast<double>(hop) / ratio.value();
  const auto target = static_cast<std::size_t>(std::llround(ratio.value() * static_cast<double>(w.size())));
  const std::size_t frames = (target + hop - 1) / hop + 1;

  const auto x = w.samples();
  const auto len = static_cast<long>(x.size());
  auto at = [&](long i) { return (i >= 0 && i < len) ? x[static_cast<std::size_t>(i)] : 0.0; };

  // Half-sample-shifted Hann: no zero taps, so the window sum never vanishes.
  std::vector<double> window(win);
  for (std::size_t i = 0; i < win; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                     static_cast<double>(win));
  }

  std::vector<double> out((frames - 1) * hop + win, 0.0);
  std::vector<double> weight(out.size(), 0.0);
  long prev = 0;
  for (std::size_t k = 0; k < frames; ++k) {
    long chosen = 0;
    if (k > 0) {
      const long nominal = std::lround(static_cast<double>(k) * analysis_hop);
      const long natural = prev + static_cast<long>(hop);
      double best = -std::numeric_limits<double>::infinity();
      chosen = nominal;
      for (long delta = -tol; delta <= tol; ++delta) {
        const long cand = nominal + delta;
        double dot = 0.0;
        double energy = 0.0;
        for (std::size_t i = 0; i < win; ++i) {
          const double c = at(cand + static_cast<long>(i));
          dot += c * at(natural + static_cast<long>(i));
          energy += c * c;
        }
        const double score = energy > 0.0 ? dot / std::sqrt(energy) : 0.0;
        if (score > best) {
          best = score;
          chosen = cand;
        }
      }
    }
    const std::size_t base = k * hop;
    for (std::size_t i = 0; i < win; ++i) {
      out[base + i] += window[i] * at(chosen + static_cast<long>(i));
      weight[base + i] += window[i];
    }
    prev = chosen;
  }

  out.resize(target);
  for (std::size_t n = 0; n < target; ++n) out[n] /= weight[n];
  return Waveform(std::move(out), w.sample_rate());
}

Waveform zero_stuff(const Waveform& w) {
  std::vector<double> out(2 * w.size(), 0.0);
  for (std::size_t n = 0; n < w.size(); ++n) out[2 * n] = w[n];
  return Waveform(std::move(out), 2 * w.sample_rate());
}

Waveform resample_at(const Waveform& w, double read_rate, int output_rate) {
  if (!(read_rate > 0.0) || !std::isfinite(read_rate)) {
    throw ConfigError("read rate must be positive and finite");
  }
  const auto out_len =
      static_cast<std::size_t>(std::llround(static_cast<double>(w.size()) / read_rate));
  const double cutoff = std::min(1.0, 1.0 / read_rate);
  const double half_width = kSincZeroCrossings / cutoff;
  // Kaiser taper tabulated over |u| in [0, 1]; Bessel evaluation per tap is
  // far too slow for minutes of audio.
  constexpr std::size_t kTable = 4096;
  static const std::vector<double> taper_table = [] {
    std::vector<double> t(kTable + 2);
    const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
    for (std::size_t i = 0; i <= kTable; ++i) {
      const double u = static_cast<double>(i) / kTable;
      t[i] = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - u * u))) / i0_beta;
    }
    t[kTable + 1] = 0.0;
    return t;
  }();

  const auto x = w.samples();
  const auto len = static_cast<long>(x.size());
  std::vector<double> out(out_len, 0.0);
  for (std::size_t j = 0; j < out_len; ++j) {
    const double pos = static_cast<double>(j) * read_rate;
    const long lo = std::max(0L, static_cast<long>(std::ceil(pos - half_width)));
    const long hi = std::min(len - 1, static_cast<long>(std::floor(pos + half_width)));
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) {
      const double dist = pos - static_cast<double>(k);
      const double u = std::abs(dist) / half_width;
      if (u >= 1.0) continue;
      const double fi = u * kTable;
      const auto i0 = static_cast<std::size_t>(fi);
      const double taper = taper_table[i0] + (fi - static_cast<double>(i0)) * (taper_table[i0 + 1] - taper_table[i0]);
      acc += x[static_cast<std::size_t>(k)] * cutoff * sinc(cutoff * dist) * taper;
    }
    out[j] = acc;
  }
  return Waveform(std::move(out), output_rate);
}

Waveform resample(const Waveform& w, F0Ratio ratio) {
  return resample_at(w, ratio.value(), w.sample_rate());
}

Waveform compensate_residual_power(const Waveform& res, F0Ratio ratio) {
  return scale(res, std::sqrt(1.0 / ratio.value()));
}

Waveform f0_transform_residual(const Waveform& res, F0Ratio ratio) {
  const double r = ratio.value();
  Waveform shifted = r < 1.0 ? resample_at(zero_stuff(res), 2.0 * r, res.sample_rate())
                             : resample(res, ratio);
  return compensate_residual_power(shifted, ratio);
}

}  // namespace resvc
