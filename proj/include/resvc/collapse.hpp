#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "resvc/analysis.hpp"
#include "resvc/signal.hpp"

namespace resvc {

// Smoothed peak envelope on the int16 amplitude scale, one value per sample.
struct EnvelopeSignal {
  std::vector<double> values;
  std::size_t slot_length = 256;
  int sample_rate = 1;

  std::size_t size() const noexcept { return values.size(); }
};

// Magnitude of the analytic signal (full-length DFT Hilbert transformer),
// max-pooled over non-overlapping slots and smoothed by a centred moving
// average of width 2*slot_length+1. Throws InsufficientDataError on an empty
// signal and ConfigError for slot_length < 8.
EnvelopeSignal extract_envelope(const Waveform& w, std::size_t slot_length = 256);

// Frames t in [0, frame_count) whose span [t*shift, (t+1)*shift) contains a
// sample with env_test - env_ref > threshold. Envelopes are truncated to the
// shorter one and may differ in length by at most one slot.
std::set<std::size_t> detect_collapsed_frames(const EnvelopeSignal& env_ref,
                                              const EnvelopeSignal& env_test, double threshold,
                                              std::size_t frame_shift_samples,
                                              std::size_t frame_count);

// Frame t comes from plain when flagged, otherwise from postfiltered.
MelCepstrumSequence substitute_features(const MelCepstrumSequence& postfiltered,
                                        const MelCepstrumSequence& plain,
                                        const std::set<std::size_t>& flagged);

}  // namespace resvc
