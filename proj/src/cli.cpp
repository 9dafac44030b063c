#include "resvc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "resvc/error.hpp"
#include "resvc/formats.hpp"
#include "resvc/pipeline.hpp"

namespace resvc {

namespace {

namespace fs = std::filesystem;

struct FeatureFlags {
  std::size_t order = 35;
  double alpha = 0.455;
  double frame_shift_s = 0.005;
};

void add_feature_flags(CLI::App* cmd, FeatureFlags& f) {
  cmd->add_option("--order", f.order, "mel-cepstrum order")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--alpha", f.alpha, "frequency warping coefficient")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999));
  cmd->add_option("--frame-shift", f.frame_shift_s, "frame shift in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

std::vector<fs::path> wav_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Residual-domain waveform modification for voice conversion", "resvc"};
  app.require_subcommand(1);

  // stats
  FeatureFlags stats_feat;
  std::string stats_dir;
  std::string stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "collect speaker statistics from a directory of WAVs");
  stats_cmd->add_option("--wav-dir", stats_dir, "directory of 16-bit mono WAV files")->required();
  stats_cmd->add_option("--out", stats_out, "statistics file to write")->required();
  add_feature_flags(stats_cmd, stats_feat);

  // convert
  FeatureFlags conv_feat;
  std::string conv_in, conv_out, src_stats_path, tgt_stats_path, trace_dir, f0_file, features;
  std::string converter_name = "meanvar";
  double threshold = 10000.0;
  std::size_t slot = 256;
  bool no_gv = false;
  std::uint64_t seed = 1;
  std::optional<double> ratio_override;
  auto* conv_cmd = app.add_subcommand("convert", "convert one utterance");
  conv_cmd->add_option("--in", conv_in, "source WAV")->required();
  conv_cmd->add_option("--out", conv_out, "converted WAV")->required();
  conv_cmd->add_option("--src-stats", src_stats_path, "source speaker statistics")->required();
  conv_cmd->add_option("--tgt-stats", tgt_stats_path, "target speaker statistics")->required();
  conv_cmd->add_option("--converter", converter_name, "spectral converter")
      ->capture_default_str()
      ->check(CLI::IsMember({"identity", "meanvar", "external"}));
  conv_cmd->add_option("--features", features, "MCEP1 file of converted features (external)");
  conv_cmd->add_option("--trace-dir", trace_dir, "write every intermediate here");
  conv_cmd->add_option("--f0-file", f0_file, "source F0 contour, one value per frame");
  conv_cmd->add_option("--threshold", threshold, "collapse detection threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  conv_cmd->add_option("--slot", slot, "envelope slot length in samples")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  conv_cmd->add_flag("--no-gv", no_gv, "disable the GV postfilter and collapse handling");
  conv_cmd->add_option("--seed", seed, "noise seed of the reference vocoder")->capture_default_str();
  conv_cmd->add_option("--f0-ratio", ratio_override,
                       "override the F0 ratio derived from the statistics");
  add_feature_flags(conv_cmd, conv_feat);

  // detect
  std::string ref_path, test_path;
  double det_threshold = 10000.0;
  std::size_t det_shift = 110;
  std::size_t det_slot = 256;
  auto* det_cmd = app.add_subcommand("detect", "print frames where the test envelope exceeds the reference");
  det_cmd->add_option("--ref", ref_path, "reference WAV")->required();
  det_cmd->add_option("--test", test_path, "test WAV")->required();
  det_cmd->add_option("--threshold", det_threshold, "envelope difference threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  det_cmd->add_option("--frame-shift", det_shift, "frame shift in samples")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  det_cmd->add_option("--slot", det_slot, "envelope slot length in samples")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));

  // analyze
  FeatureFlags ana_feat;
  std::string ana_in, ana_prefix;
  auto* ana_cmd = app.add_subcommand("analyze", "dump mel-cepstra and F0 of a WAV");
  ana_cmd->add_option("--in", ana_in, "input WAV")->required();
  ana_cmd->add_option("--out", ana_prefix, "output prefix; writes <prefix>.mcep and <prefix>.f0")
      ->required();
  add_feature_flags(ana_cmd, ana_feat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*stats_cmd) {
      McepOptions mo{stats_feat.order, stats_feat.alpha, stats_feat.frame_shift_s, 1024};
      F0Options fo;
      fo.frame_shift_s = stats_feat.frame_shift_s;
      std::vector<std::pair<MelCepstrumSequence, F0Contour>> utts;
      for (const auto& path : wav_files(stats_dir)) {
        const Waveform w = read_wav(path);
        utts.emplace_back(extract_aligned_mcep(w, mo), estimate_f0(w, fo));
      }
      write_stats(collect_stats(utts), stats_out);
      err << "stats: " << utts.size() << " utterances -> " << stats_out << "\n";
    } else if (*conv_cmd) {
      const Waveform x = read_wav(conv_in);
      const SpeakerStats src = read_stats(src_stats_path);
      const SpeakerStats tgt = read_stats(tgt_stats_path);

      ConversionConfig cfg;
      cfg.mcep_order = conv_feat.order;
      cfg.alpha = conv_feat.alpha;
      cfg.frame_shift_s = conv_feat.frame_shift_s;
      cfg.collapse_threshold = threshold;
      cfg.slot_length = slot;
      cfg.use_gv = !no_gv;
      cfg.seed = seed;
      cfg.f0_ratio = ratio_override ? F0Ratio(*ratio_override)
                                    : compute_f0_ratio(src.logf0_mean, tgt.logf0_mean);

      std::unique_ptr<SpectralConverter> converter;
      if (converter_name == "identity") {
        cfg.converter_kind = ConverterKind::kIdentity;
        converter = identity_converter();
      } else if (converter_name == "meanvar") {
        cfg.converter_kind = ConverterKind::kMeanVariance;
        converter = mean_variance_converter(src, tgt);
      } else {
        if (features.empty()) {
          err << "convert: --converter external requires --features\n";
          return 1;
        }
        cfg.converter_kind = ConverterKind::kExternal;
        converter = external_converter(read_mcep(features, x.sample_rate()));
      }

      std::optional<F0Contour> f0;
      if (!f0_file.empty()) f0 = read_f0(f0_file, cfg.frame_shift_s);

      const auto result = convert_utterance(x, cfg, *converter, src, tgt, f0 ? &*f0 : nullptr);
      write_wav(result.output, conv_out);
      if (!trace_dir.empty()) write_trace(result.trace, trace_dir);
      for (const auto& w : result.trace.warnings) err << "warning: " << w << "\n";
      err << "convert: ratio " << cfg.f0_ratio.value() << ", " << result.trace.flagged.size()
          << " frames substituted\n";
    } else if (*det_cmd) {
      const Waveform ref = read_wav(ref_path);
      const Waveform test = read_wav(test_path);
      const auto env_ref = extract_envelope(ref, det_slot);
      const auto env_test = extract_envelope(test, det_slot);
      const std::size_t len = std::min(ref.size(), test.size());
      const std::size_t frames = (len + det_shift - 1) / det_shift;
      for (std::size_t t : detect_collapsed_frames(env_ref, env_test, det_threshold, det_shift, frames)) {
        out << t << "\n";
      }
    } else if (*ana_cmd) {
      const Waveform w = read_wav(ana_in);
      McepOptions mo{ana_feat.order, ana_feat.alpha, ana_feat.frame_shift_s, 1024};
      F0Options fo;
      fo.frame_shift_s = ana_feat.frame_shift_s;
      write_mcep(extract_aligned_mcep(w, mo), ana_prefix + ".mcep");
      write_f0(estimate_f0(w, fo), ana_prefix + ".f0");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace resvc
