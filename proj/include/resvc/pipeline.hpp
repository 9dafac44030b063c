#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "resvc/analysis.hpp"
#include "resvc/collapse.hpp"
#include "resvc/convert.hpp"
#include "resvc/f0xform.hpp"
#include "resvc/signal.hpp"

namespace resvc {

enum class ConverterKind { kIdentity, kMeanVariance, kExternal };

struct ConversionConfig {
  F0Ratio f0_ratio{1.0};
  std::size_t mcep_order = 35;
  double alpha = 0.455;
  double frame_shift_s = 0.005;
  std::size_t frame_length = 1024;
  double collapse_threshold = 10000.0;
  std::size_t slot_length = 256;
  bool use_gv = true;
  ConverterKind converter_kind = ConverterKind::kMeanVariance;
  std::uint64_t seed = 1;
  F0Options f0{};

  McepOptions mcep_options() const {
    return {mcep_order, alpha, frame_shift_s, frame_length};
  }

  // Throws ConfigError if a field breaks a module precondition.
  void validate() const;
};

// Every intermediate of one conversion run. Without the postfilter the
// reference branch is skipped: sig_y_W, env_W and env_GV stay empty and
// flagged is empty.
struct PipelineTrace {
  Waveform sig_wx;
  Waveform res_wx;
  Waveform res_y;
  MelCepstrumSequence mcp_wx;
  MelCepstrumSequence mcp_y;
  MelCepstrumSequence mcp_y_GV;
  MelCepstrumSequence mcp_y_SUB;
  EnvelopeSignal env_W;
  EnvelopeSignal env_GV;
  std::set<std::size_t> flagged;
  Waveform sig_y_W;
  Waveform sig_y_GV;
  Waveform sig_y_SUB;
  std::vector<std::string> warnings;
};

inline constexpr std::array<std::string_view, 13> kTraceKeys = {
    "sig_wx",  "res_wx", "res_y",  "mcp_wx",  "mcp_y",    "mcp_y_GV", "mcp_y_SUB",
    "env_W",   "env_GV", "flagged", "sig_y_W", "sig_y_GV", "sig_y_SUB"};

struct ConversionResult {
  Waveform output;
  PipelineTrace trace;
};

// Runs the residual-domain conversion:
//   1  sig_wx = wsola(x, r)
//   2  mcp_wx = mel-cepstra of sig_wx
//   3  res_wx = inverse_filter(sig_wx, mcp_wx)
//   4  res_y = f0_transform_residual(res_wx, r)   (fold, resample, compensate)
//   5  re-time mcp_wx to the length of res_y
//   6a mcp_y = converter(.)         6b mcp_y_GV = GV postfilter (optional)
//   7a sig_y_W = reference vocoder  7b sig_y_GV = synthesis_filter(res_y, mcp_y_GV)
//   8a flag collapsed frames        8b mcp_y_SUB = substitution
//   9a sig_y_SUB = synthesis_filter(res_y, mcp_y_SUB)
//   9b output = sig_y_SUB with the power of x
// source_f0, when given, replaces the estimated F0 contour of x for the
// reference vocoder. Failures surface as PipelineError naming the stage.
ConversionResult convert_utterance(const Waveform& x, const ConversionConfig& cfg,
                                   const SpectralConverter& converter,
                                   const SpeakerStats& src_stats, const SpeakerStats& tgt_stats,
                                   const F0Contour* source_f0 = nullptr);

// One file per trace key under dir (created if missing): waveforms as WAV,
// residuals as one value per line, features in the MCEP1 format, envelopes
// as two-column text, flagged frames one index per line.
void write_trace(const PipelineTrace& trace, const std::filesystem::path& dir);

}  // namespace resvc
