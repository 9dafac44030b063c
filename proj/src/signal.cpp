#include "resvc/signal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>

#include "resvc/error.hpp"

namespace resvc {

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw ConfigError("sample rate must be positive, got " + std::to_string(sample_rate_));
  }
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    if (!std::isfinite(samples_[n])) {
      throw ConfigError("non-finite sample at index " + std::to_string(n));
    }
  }
}

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0) {
    throw FormatError(where + "missing RIFF chunk id");
  }
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(where + "RIFF form type is not WAVE");
  }

  bool have_fmt = false;
  int sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Some writers leave a bogus data size; accept the truncated data chunk.
      if (std::memcmp(chunk, "data", 4) != 0) {
        throw FormatError(where + "chunk '" + std::string(chunk, chunk + 4) + "' overruns file");
      }
    }
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw FormatError(where + "fmt chunk too short");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = read_u16(f);
      const std::uint16_t channels = read_u16(f + 2);
      const std::uint32_t rate = read_u32(f + 4);
      const std::uint16_t bits = read_u16(f + 14);
      if (format != 1) {
        throw FormatError(where + "unsupported audio_format " + std::to_string(format) +
                          " (only PCM = 1)");
      }
      if (channels != 1) {
        throw FormatError(where + "unsupported num_channels " + std::to_string(channels) +
                          " (only mono)");
      }
      if (bits != 16) {
        throw FormatError(where + "unsupported bits_per_sample " + std::to_string(bits) +
                          " (only 16)");
      }
      if (rate == 0 || rate > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
        throw FormatError(where + "invalid sample_rate " + std::to_string(rate));
      }
      sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw FormatError(where + "missing fmt chunk");
  if (data == nullptr) throw FormatError(where + "missing data chunk");

  std::vector<double> samples(data_size / 2);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    samples[n] = static_cast<std::int16_t>(read_u16(data + 2 * n));
  }
  return Waveform(std::move(samples), sample_rate);
}

void write_wav(const Waveform& w, const std::filesystem::path& path) {
  const auto n = w.size();
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(2 * n);

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : w.samples()) {
    // nearbyint follows the default round-half-to-even mode.
    const double r = std::clamp(std::nearbyint(s), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(r)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

double power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

Waveform scale(const Waveform& w, double gain) {
  std::vector<double> out(w.data());
  for (double& v : out) v *= gain;
  return Waveform(std::move(out), w.sample_rate());
}

Waveform match_power(const Waveform& y, const Waveform& reference) {
  const double py = power(y);
  if (py <= 0.0) throw DegenerateSignalError("match_power: signal has zero power");
  return scale(y, std::sqrt(power(reference) / py));
}

std::size_t seconds_to_samples(double seconds, int sample_rate) {
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

std::vector<double> hann_window(std::size_t length, bool periodic) {
  std::vector<double> w(length);
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  const double denom = periodic ? static_cast<double>(length) : static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
  }
  return w;
}

double snr_db(std::span<const double> reference, std::span<const double> estimate) {
  const std::size_t n = std::min(reference.size(), estimate.size());
  double sig = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sig += reference[i] * reference[i];
    const double d = reference[i] - estimate[i];
    err += d * d;
  }
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(sig / err);
}

}  // namespace resvc
