#include "resvc/pipeline.hpp"

#include <fstream>
#include <string>
#include <utility>

#include "resvc/error.hpp"
#include "resvc/formats.hpp"
#include "resvc/mlsa.hpp"

namespace resvc {

namespace {

template <typename Fn>
auto run_stage(const char* label, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PipelineError&) {
    throw;
  } catch (const Error& e) {
    throw PipelineError(label, e.what());
  }
}

void write_samples_text(const Waveform& w, const std::filesystem::path& path) {
  std::string out;
  out.reserve(w.size() * 20);
  for (double v : w.samples()) {
    out += format_double(v);
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace

void ConversionConfig::validate() const {
  if (mcep_order < 1) throw ConfigError("mcep order must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
  if (!(frame_shift_s > 0.0)) throw ConfigError("frame shift must be positive");
  if (!(collapse_threshold > 0.0)) throw ConfigError("collapse threshold must be positive");
  if (slot_length < 8) throw ConfigError("slot length must be at least 8 samples");
  if (frame_length < 64 || (frame_length & (frame_length - 1)) != 0) {
    throw ConfigError("frame length must be a power of two >= 64");
  }
}

ConversionResult convert_utterance(const Waveform& x, const ConversionConfig& cfg,
                                   const SpectralConverter& converter,
                                   const SpeakerStats& src_stats, const SpeakerStats& tgt_stats,
                                   const F0Contour* source_f0) {
  run_stage("setup", [&] {
    if (x.empty()) throw InsufficientDataError("input signal is empty");
    cfg.validate();
    src_stats.validate();
    tgt_stats.validate();
    return 0;
  });

  const F0Ratio ratio = cfg.f0_ratio;
  const McepOptions mcep_opt = cfg.mcep_options();
  ConversionResult result;
  PipelineTrace& tr = result.trace;

  tr.sig_wx = run_stage("1 (WSOLA)", [&] { return wsola(x, ratio); });
  tr.mcp_wx = run_stage("2 (mcep extraction)", [&] { return extract_aligned_mcep(tr.sig_wx, mcep_opt); });
  tr.res_wx = run_stage("3 (inverse filtering)",
                        [&] { return inverse_filter(tr.sig_wx, tr.mcp_wx, &tr.warnings); });
  tr.res_y = run_stage("4 (residual F0 transformation)",
                       [&] { return f0_transform_residual(tr.res_wx, ratio); });

  const std::size_t shift = tr.mcp_wx.shift_samples();
  const auto mcp_i = run_stage("5 (feature interpolation)", [&] {
    return interpolate_frames(tr.mcp_wx, aligned_frame_count(tr.res_y.size(), shift));
  });

  tr.mcp_y = run_stage("6a (spectral conversion)", [&] {
    auto y = converter.convert(mcp_i);
    if (!y.same_shape(mcp_i) || y.alpha() != mcp_i.alpha() ||
        y.frame_shift_s() != mcp_i.frame_shift_s()) {
      throw AlignmentError("converter '" + converter.name() + "' changed the feature shape");
    }
    return y;
  });

  tr.mcp_y_GV = cfg.use_gv ? run_stage("6b (GV postfilter)", [&] {
    return gv_postfilter(tr.mcp_y, tgt_stats.gv, &tr.warnings);
  })
                           : tr.mcp_y;

  if (cfg.use_gv) {
    tr.sig_y_W = run_stage("7a (reference vocoder)", [&] {
      const F0Contour src_f0 =
          source_f0 != nullptr ? *source_f0 : estimate_f0(x, [&] {
            F0Options o = cfg.f0;
            o.frame_shift_s = cfg.frame_shift_s;
            return o;
          }());
      const F0Contour converted =
          resample_f0(convert_f0(src_f0, src_stats, tgt_stats), tr.mcp_y_GV.frame_count());
      return reference_vocoder(tr.mcp_y_GV, converted, x.sample_rate(), cfg.seed, &tr.warnings);
    });
  } else {
    tr.sig_y_W = Waveform({}, x.sample_rate());
  }

  tr.sig_y_GV = run_stage("7b (synthesis filtering)",
                          [&] { return synthesis_filter(tr.res_y, tr.mcp_y_GV, &tr.warnings); });

  if (cfg.use_gv) {
    run_stage("8a (collapse detection)", [&] {
      tr.env_W = extract_envelope(tr.sig_y_W, cfg.slot_length);
      tr.env_GV = extract_envelope(tr.sig_y_GV, cfg.slot_length);
      tr.flagged = detect_collapsed_frames(tr.env_W, tr.env_GV, cfg.collapse_threshold, shift,
                                           tr.mcp_y_GV.frame_count());
      return 0;
    });
  } else {
    tr.env_W = EnvelopeSignal{{}, cfg.slot_length, x.sample_rate()};
    tr.env_GV = EnvelopeSignal{{}, cfg.slot_length, x.sample_rate()};
  }

  tr.mcp_y_SUB = run_stage("8b (feature substitution)",
                           [&] { return substitute_features(tr.mcp_y_GV, tr.mcp_y, tr.flagged); });

  // Without flagged frames the substituted features equal mcp_y_GV.
  tr.sig_y_SUB = tr.flagged.empty()
                     ? tr.sig_y_GV
                     : run_stage("9a (final synthesis)", [&] {
                         return synthesis_filter(tr.res_y, tr.mcp_y_SUB);
                       });

  result.output = run_stage("9b (power normalization)", [&] { return match_power(tr.sig_y_SUB, x); });
  return result;
}

void write_trace(const PipelineTrace& trace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create trace directory " + dir.string() + ": " + ec.message());

  write_wav(trace.sig_wx, dir / "sig_wx.wav");
  write_samples_text(trace.res_wx, dir / "res_wx.txt");
  write_samples_text(trace.res_y, dir / "res_y.txt");
  write_mcep(trace.mcp_wx, dir / "mcp_wx.mcep");
  write_mcep(trace.mcp_y, dir / "mcp_y.mcep");
  write_mcep(trace.mcp_y_GV, dir / "mcp_y_GV.mcep");
  write_mcep(trace.mcp_y_SUB, dir / "mcp_y_SUB.mcep");
  write_envelope(trace.env_W, dir / "env_W.txt");
  write_envelope(trace.env_GV, dir / "env_GV.txt");
  {
    std::string out;
    for (std::size_t t : trace.flagged) out += std::to_string(t) + "\n";
    std::ofstream f(dir / "flagged.txt", std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "flagged.txt").string());
    f << out;
  }
  write_wav(trace.sig_y_W, dir / "sig_y_W.wav");
  write_wav(trace.sig_y_GV, dir / "sig_y_GV.wav");
  write_wav(trace.sig_y_SUB, dir / "sig_y_SUB.wav");
}

}  // namespace resvc
