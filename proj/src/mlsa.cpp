#include "resvc/mlsa.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "resvc/error.hpp"

namespace resvc {

namespace {

// Modified Pade coefficients for orders 4 and 5.
constexpr std::array<double, 5> kPade4 = {1.0, 0.4999273, 0.1067005, 0.01170221, 0.0005656279};
constexpr std::array<double, 6> kPade5 = {1.0,          0.4999391,     0.1107098,
                                          0.01369984,   0.0009564853,  0.00003041721};

enum class Direction { kSynthesis, kInverse };

// Largest |F| either Pade stage sees: the first stage carries b_1 through a
// one-pole section peaking at (1 + alpha), the second the warped FIR b_2..b_M.
double stage_peak(std::span<const double> b, double alpha) {
  if (b.size() < 2) return 0.0;
  double peak = std::abs(b[1]) * (1.0 + std::abs(alpha));
  constexpr int kGrid = 128;
  for (int i = 0; i <= kGrid; ++i) {
    const std::complex<double> z1 = std::polar(1.0, -std::numbers::pi * i / kGrid);
    const std::complex<double> ap = (z1 - alpha) / (1.0 - alpha * z1);
    std::complex<double> phi = (1.0 - alpha * alpha) * z1 / (1.0 - alpha * z1) * ap;
    std::complex<double> f = 0.0;
    for (std::size_t k = 2; k < b.size(); ++k) {
      f += b[k] * phi;
      phi *= ap;
    }
    peak = std::max(peak, std::abs(f));
  }
  return peak;
}

Waveform run_filter(const Waveform& input, const MelCepstrumSequence& m, Direction dir,
                    std::vector<std::string>* warnings) {
  const std::size_t frames = m.frame_count();
  const std::size_t shift = m.shift_samples();
  const std::size_t len = input.size();
  const std::size_t span_len = frames * shift;
  const std::size_t gap = span_len > len ? span_len - len : len - span_len;
  if (frames == 0 ? len != 0 : gap > shift) {
    throw AlignmentError("signal has " + std::to_string(len) + " samples but features cover " +
                         std::to_string(frames) + " frames x " + std::to_string(shift) +
                         " samples = " + std::to_string(span_len));
  }
  if (len == 0) return Waveform({}, input.sample_rate());

  const std::size_t dim = m.dim();
  const double sign = dir == Direction::kSynthesis ? 1.0 : -1.0;

  std::vector<double> b(frames * dim);
  std::vector<double> mc(dim);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto frame = m.frame(t);
    for (std::size_t k = 0; k < dim; ++k) mc[k] = sign * frame[k];
    auto bt = mcep_to_filter_coefficients(mc, m.alpha());
    const double peak = stage_peak(bt, m.alpha());
    if (peak > kPadeValidityBound) {
      const double shrink = kPadeValidityBound / peak;
      if (warnings != nullptr) {
        warnings->push_back("frame " + std::to_string(t) + ": log transfer peak " +
                            std::to_string(peak) + " exceeds the Pade bound; scaled to " +
                            std::to_string(kPadeValidityBound));
      }
      for (std::size_t k = 1; k < dim; ++k) mc[k] *= shrink;
      bt = mcep_to_filter_coefficients(mc, m.alpha());
    }
    std::copy(bt.begin(), bt.end(), b.begin() + static_cast<long>(t * dim));
  }

  MlsaFilter filter(m.order(), m.alpha());
  std::vector<double> out(len);
  std::vector<double> cur(dim);
  const auto x = input.samples();
  for (std::size_t n = 0; n < len; ++n) {
    const std::size_t t0 = n / shift;
    if (t0 + 1 >= frames) {
      std::copy_n(b.begin() + static_cast<long>((frames - 1) * dim), dim, cur.begin());
    } else {
      const double frac = static_cast<double>(n - t0 * shift) / static_cast<double>(shift);
      const double* b0 = &b[t0 * dim];
      const double* b1 = &b[(t0 + 1) * dim];
      for (std::size_t k = 0; k < dim; ++k) cur[k] = b0[k] + frac * (b1[k] - b0[k]);
    }
    out[n] = filter.process(x[n], cur);
  }
  return Waveform(std::move(out), input.sample_rate());
}

}  // namespace

std::vector<double> mcep_to_filter_coefficients(std::span<const double> mcep, double alpha) {
  std::vector<double> b(mcep.begin(), mcep.end());
  if (b.empty()) return b;
  for (std::size_t i = b.size() - 1; i-- > 0;) b[i] = mcep[i] - alpha * b[i + 1];
  return b;
}

MlsaFilter::MlsaFilter(std::size_t order, double alpha, int pade_order)
    : order_(order), alpha_(alpha), pade_order_(pade_order) {
  if (pade_order == 4) {
    pade_ = kPade4;
  } else if (pade_order == 5) {
    pade_ = kPade5;
  } else {
    throw ConfigError("Pade order must be 4 or 5, got " + std::to_string(pade_order));
  }
  if (order_ < 1) throw ConfigError("MLSA filter order must be at least 1");
  const auto pd = static_cast<std::size_t>(pade_order_);
  delay_.assign(3 * (pd + 1) + pd * (order_ + 2), 0.0);
}

void MlsaFilter::reset() { std::fill(delay_.begin(), delay_.end(), 0.0); }

double MlsaFilter::process(double x, std::span<const double> b) {
  const double gain = std::exp(b[0]);
  return gain * second_stage(first_stage(x, b[1]), b);
}

// Handles the b_1 term, which needs no delay-free path of its own.
double MlsaFilter::first_stage(double x, double b1) {
  const auto pd = static_cast<std::size_t>(pade_order_);
  double* d = delay_.data();
  double* pt = d + pd + 1;
  const double aa = 1.0 - alpha_ * alpha_;
  double out = 0.0;
  for (std::size_t i = pd; i >= 1; --i) {
    d[i] = aa * pt[i - 1] + alpha_ * d[i];
    pt[i] = d[i] * b1;
    const double v = pt[i] * pade_[i];
    x += (i & 1) ? v : -v;
    out += v;
  }
  pt[0] = x;
  return out + x;
}

double MlsaFilter::second_stage(double x, std::span<const double> b) {
  const auto pd = static_cast<std::size_t>(pade_order_);
  double* d = delay_.data() + 2 * (pd + 1);
  double* pt = d + pd * (order_ + 2);
  double out = 0.0;
  for (std::size_t i = pd; i >= 1; --i) {
    pt[i] = fir(pt[i - 1], b, d + (i - 1) * (order_ + 2));
    const double v = pt[i] * pade_[i];
    x += (i & 1) ? v : -v;
    out += v;
  }
  pt[0] = x;
  return out + x;
}

// Warped FIR over b_2..b_M; d holds order+2 delay cells.
double MlsaFilter::fir(double x, std::span<const double> b, double* d) const {
  const double aa = 1.0 - alpha_ * alpha_;
  d[0] = x;
  d[1] = aa * d[0] + alpha_ * d[1];
  double y = 0.0;
  for (std::size_t i = 2; i <= order_; ++i) {
    d[i] += alpha_ * (d[i + 1] - d[i - 1]);
    y += d[i] * b[i];
  }
  for (std::size_t i = order_ + 1; i > 1; --i) d[i] = d[i - 1];
  return y;
}

Waveform synthesis_filter(const Waveform& excitation, const MelCepstrumSequence& m,
                          std::vector<std::string>* warnings) {
  return run_filter(excitation, m, Direction::kSynthesis, warnings);
}

Waveform inverse_filter(const Waveform& signal, const MelCepstrumSequence& m,
                        std::vector<std::string>* warnings) {
  return run_filter(signal, m, Direction::kInverse, warnings);
}

Waveform reference_vocoder(const MelCepstrumSequence& m, const F0Contour& f0, int sample_rate,
                           std::uint64_t seed, std::vector<std::string>* warnings) {
  if (f0.size() != m.frame_count()) {
    throw AlignmentError("F0 contour has " + std::to_string(f0.size()) +
                         " frames, features have " + std::to_string(m.frame_count()));
  }
  if (sample_rate != m.sample_rate()) {
    throw ConfigError("vocoder rate " + std::to_string(sample_rate) +
                      " differs from feature rate " + std::to_string(m.sample_rate()));
  }
  const std::size_t shift = m.shift_samples();
  const std::size_t len = m.frame_count() * shift;
  std::vector<double> excitation(len, 0.0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  double phase = 1.0;
  for (std::size_t n = 0; n < len; ++n) {
    const double f = f0.values[n / shift];
    if (f > 0.0) {
      if (phase >= 1.0) {
        excitation[n] = std::sqrt(sample_rate / f);
        phase -= 1.0;
      }
      phase += f / sample_rate;
    } else {
      excitation[n] = noise(rng);
      phase = 1.0;
    }
  }
  return synthesis_filter(Waveform(std::move(excitation), sample_rate), m, warnings);
}

}  // namespace resvc
