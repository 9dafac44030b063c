#include <catch_amalgamated.hpp>

#include <cmath>

#include "resvc/collapse.hpp"
#include "resvc/error.hpp"
#include "test_support.hpp"

using namespace resvc;
using namespace resvc::testing;
using Catch::Approx;

namespace {

constexpr int kRate = 22050;

// O(n^2) analytic-signal magnitude.
std::vector<double> analytic_magnitude(std::span<const double> x) {
  const std::size_t n = x.size();
  auto spec = naive_dft(x);
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k < n) {
      spec[k] *= 2.0;
    } else if (2 * k > n) {
      spec[k] = 0.0;
    }
  }
  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += spec[k] * std::polar(1.0, 2.0 * kPi * static_cast<double>((k * i) % n) / static_cast<double>(n));
    }
    mag[i] = std::abs(acc) / static_cast<double>(n);
  }
  return mag;
}

// Slow reference envelope: pooling and a centred average over the available
// neighbours.
std::vector<double> reference_envelope(std::span<const double> x, std::size_t slot) {
  const std::size_t n = x.size();
  const auto mag = analytic_magnitude(x);
  std::vector<double> pooled(n);
  for (std::size_t s = 0; s < n; s += slot) {
    const std::size_t e = std::min(n, s + slot);
    const double peak = *std::max_element(mag.begin() + static_cast<long>(s), mag.begin() + static_cast<long>(e));
    std::fill(pooled.begin() + static_cast<long>(s), pooled.begin() + static_cast<long>(e), peak);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= slot ? i - slot : 0;
    const std::size_t hi = std::min(n - 1, i + slot);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += pooled[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

EnvelopeSignal constant_env(std::size_t n, double v) { return {std::vector<double>(n, v), 256, kRate}; }

}  // namespace

TEST_CASE("envelope matches the direct computation", "[collapse]") {
  for (std::size_t n : {1500UL, 1501UL}) {
    const auto x = speech_like(150.0, static_cast<double>(n) / kRate + 0.01, kRate, 3);
    const std::vector<double> seg(x.begin(), x.begin() + static_cast<long>(n));
    const auto env = extract_envelope(Waveform(seg, kRate), 64);
    REQUIRE(env.size() == n);
    REQUIRE(env.slot_length == 64);
    REQUIRE(env.sample_rate == kRate);
    const auto ref = reference_envelope(seg, 64);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(env.values[i] == Approx(ref[i]).epsilon(1e-9).margin(1e-6));
    const auto mag = analytic_magnitude(seg);
    const double bound = *std::max_element(mag.begin(), mag.end());
    for (double v : env.values) REQUIRE(v <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("envelope of a sinusoid is its amplitude", "[collapse]") {
  const double a = 7000.0;
  const auto env = extract_envelope(Waveform(sine(1000.0, a, kRate, kRate), kRate));
  for (std::size_t i = 1000; i + 1000 < env.size(); ++i) REQUIRE(env.values[i] == Approx(a).epsilon(0.05));
}

TEST_CASE("envelope properties", "[collapse]") {
  const auto x = speech_like(120.0, 0.5, kRate, 4);
  const auto env = extract_envelope(Waveform(x, kRate));
  for (double v : env.values) REQUIRE(v >= 0.0);

  const double a = 2.5;
  std::vector<double> y(x);
  for (double& v : y) v *= a;
  const auto scaled = extract_envelope(Waveform(y, kRate));
  for (std::size_t i = 0; i < env.size(); ++i) {
    REQUIRE(scaled.values[i] == Approx(a * env.values[i]).epsilon(1e-9).margin(1e-9));
  }

  const auto silent = extract_envelope(Waveform(std::vector<double>(3000, 0.0), kRate));
  for (double v : silent.values) REQUIRE(v == 0.0);

  REQUIRE_THROWS_AS(extract_envelope(Waveform({}, kRate)), InsufficientDataError);
  REQUIRE_THROWS_AS(extract_envelope(Waveform(x, kRate), 4), ConfigError);
}

TEST_CASE("collapse detection", "[collapse]") {
  const auto ref = constant_env(2000, 1000.0);
  REQUIRE(detect_collapsed_frames(ref, ref, 10000.0, 110, 19).empty());

  auto burst = ref;
  for (std::size_t i = 500; i <= 700; ++i) burst.values[i] = 15000.0;
  REQUIRE(detect_collapsed_frames(ref, burst, 10000.0, 110, 19) == std::set<std::size_t>{4, 5, 6});

  // only the test-above-reference direction counts
  REQUIRE(detect_collapsed_frames(burst, ref, 10000.0, 110, 19).empty());

  const auto near = constant_env(2000, 1000.0 + 9999.0);
  REQUIRE(detect_collapsed_frames(ref, near, 10000.0, 110, 19).empty());
  const auto over = constant_env(2000, 1000.0 + 10000.5);
  REQUIRE(detect_collapsed_frames(ref, over, 10000.0, 110, 19).size() == 19);

  // frame_count caps the result
  REQUIRE(detect_collapsed_frames(ref, over, 10000.0, 110, 3) == std::set<std::size_t>{0, 1, 2});

  REQUIRE_THROWS_AS(detect_collapsed_frames(ref, burst, 0.0, 110, 19), ConfigError);
  REQUIRE_THROWS_AS(detect_collapsed_frames(ref, burst, -5.0, 110, 19), ConfigError);

  // lengths within one slot are truncated, beyond that rejected
  REQUIRE_NOTHROW(detect_collapsed_frames(ref, constant_env(2200, 1000.0), 10000.0, 110, 19));
  REQUIRE_THROWS_AS(detect_collapsed_frames(ref, constant_env(2300, 1000.0), 10000.0, 110, 19),
                    AlignmentError);
}

TEST_CASE("detection is monotone in the threshold", "[collapse]") {
  const auto a = white_noise(4000, 5000.0, 1);
  const auto b = white_noise(4000, 5000.0, 2);
  EnvelopeSignal ea{{}, 256, kRate}, eb{{}, 256, kRate};
  for (std::size_t i = 0; i < a.size(); ++i) {
    ea.values.push_back(std::abs(a[i]));
    eb.values.push_back(std::abs(b[i]));
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(1.0, 15000.0);
  std::vector<double> thresholds(10);
  for (double& t : thresholds) t = dist(rng);
  std::sort(thresholds.begin(), thresholds.end());
  std::set<std::size_t> prev = detect_collapsed_frames(ea, eb, thresholds[0], 110, 37);
  REQUIRE_FALSE(prev.empty());
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    const auto cur = detect_collapsed_frames(ea, eb, thresholds[i], 110, 37);
    REQUIRE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    prev = cur;
  }
}

TEST_CASE("feature substitution", "[collapse]") {
  const MelCepstrumSequence post({1, 2, 3, 4, 5, 6}, 2, 0.455, 0.005, kRate);
  const MelCepstrumSequence plain({-1, -2, -3, -4, -5, -6}, 2, 0.455, 0.005, kRate);
  REQUIRE(substitute_features(post, plain, {}) == post);
  REQUIRE(substitute_features(post, plain, {0, 1, 2}) == plain);
  REQUIRE(substitute_features(post, plain, {1}).coefficients() == std::vector<double>{1, 2, -3, -4, 5, 6});
  // indices past the end are ignored
  REQUIRE(substitute_features(post, plain, {2, 9}).coefficients() == std::vector<double>{1, 2, 3, 4, -5, -6});

  const MelCepstrumSequence shorter({1, 2, 3, 4}, 2, 0.455, 0.005, kRate);
  REQUIRE_THROWS_AS(substitute_features(post, shorter, {}), AlignmentError);
  const MelCepstrumSequence other_alpha({1, 2, 3, 4, 5, 6}, 2, 0.3, 0.005, kRate);
  REQUIRE_THROWS_AS(substitute_features(post, other_alpha, {}), AlignmentError);
}
