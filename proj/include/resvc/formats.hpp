#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>

#include "resvc/analysis.hpp"
#include "resvc/collapse.hpp"
#include "resvc/convert.hpp"

namespace resvc {

// Binary feature file: "MCEP1", u32 frame_count, u32 order+1, f64 alpha,
// f64 frame_shift_s, then frame_count*(order+1) f32 values, all
// little-endian. The sample rate is not stored and must be supplied.
void write_mcep(const MelCepstrumSequence& m, const std::filesystem::path& path);
MelCepstrumSequence read_mcep(const std::filesystem::path& path, int sample_rate);

// `key = value` text with keys logf0_mean, logf0_var, mcep_mean, mcep_var, gv;
// vectors are whitespace-separated. Blank lines and '#' comments are skipped.
void write_stats(const SpeakerStats& s, const std::filesystem::path& path);
SpeakerStats read_stats(const std::filesystem::path& path);

// F0 contour as text, one value in Hz per line (0 = unvoiced).
void write_f0(const F0Contour& f0, const std::filesystem::path& path);
F0Contour read_f0(const std::filesystem::path& path, double frame_shift_s);

// "sample_index value" per line.
void write_envelope(const EnvelopeSignal& env, const std::filesystem::path& path);

// Shortest round-trip decimal form of v.
std::string format_double(double v);

}  // namespace resvc
