#include "resvc/formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "resvc/error.hpp"

namespace resvc {

namespace {

constexpr char kMcepMagic[5] = {'M', 'C', 'E', 'P', '1'};

template <typename U>
void put_le(std::string& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

double parse_double(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw FormatError(where + ": cannot parse number '" + std::string(token) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_mcep(const MelCepstrumSequence& m, const std::filesystem::path& path) {
  std::string out(kMcepMagic, sizeof(kMcepMagic));
  put_le(out, static_cast<std::uint32_t>(m.frame_count()));
  put_le(out, static_cast<std::uint32_t>(m.dim()));
  put_le(out, std::bit_cast<std::uint64_t>(m.alpha()));
  put_le(out, std::bit_cast<std::uint64_t>(m.frame_shift_s()));
  for (double c : m.coefficients()) {
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(c)));
  }
  dump(out, path);
}

MelCepstrumSequence read_mcep(const std::filesystem::path& path, int sample_rate) {
  const auto bytes = slurp(path);
  const std::string where = path.string();
  constexpr std::size_t header = 5 + 4 + 4 + 8 + 8;
  if (bytes.size() < header || std::memcmp(bytes.data(), kMcepMagic, 5) != 0) {
    throw FormatError(where + ": missing MCEP1 magic");
  }
  const auto frames = get_le<std::uint32_t>(bytes.data() + 5);
  const auto dim = get_le<std::uint32_t>(bytes.data() + 9);
  const double alpha = std::bit_cast<double>(get_le<std::uint64_t>(bytes.data() + 13));
  const double shift = std::bit_cast<double>(get_le<std::uint64_t>(bytes.data() + 21));
  const std::size_t count = static_cast<std::size_t>(frames) * dim;
  if (bytes.size() != header + 4 * count) {
    throw FormatError(where + ": frame_count x dimension (" + std::to_string(frames) + " x " +
                      std::to_string(dim) + ") does not match the payload size");
  }
  std::vector<double> coeffs(count);
  for (std::size_t i = 0; i < count; ++i) {
    coeffs[i] = std::bit_cast<float>(get_le<std::uint32_t>(bytes.data() + header + 4 * i));
  }
  try {
    return MelCepstrumSequence(std::move(coeffs), dim, alpha, shift, sample_rate);
  } catch (const ConfigError& e) {
    throw FormatError(where + ": " + e.what());
  }
}

void write_stats(const SpeakerStats& s, const std::filesystem::path& path) {
  std::string out;
  out += "logf0_mean = " + format_double(s.logf0_mean) + "\n";
  out += "logf0_var = " + format_double(s.logf0_var) + "\n";
  out += "mcep_mean = " + join(s.mcep_mean) + "\n";
  out += "mcep_var = " + join(s.mcep_var) + "\n";
  out += "gv = " + join(s.gv) + "\n";
  dump(out, path);
}

SpeakerStats read_stats(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  const std::string text(bytes.begin(), bytes.end());
  std::map<std::string, std::vector<double>> fields;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw FormatError(where + ": expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    if (key != "logf0_mean" && key != "logf0_var" && key != "mcep_mean" && key != "mcep_var" &&
        key != "gv") {
      throw FormatError(where + ": unknown key '" + key + "'");
    }
    if (fields.count(key)) throw FormatError(where + ": duplicate key '" + key + "'");
    std::vector<double> values;
    std::istringstream tokens{std::string(body.substr(eq + 1))};
    std::string tok;
    while (tokens >> tok) values.push_back(parse_double(tok, where));
    fields[key] = std::move(values);
  }
  auto require = [&](const char* key) -> std::vector<double>& {
    auto it = fields.find(key);
    if (it == fields.end()) throw FormatError(path.string() + ": missing key '" + key + "'");
    return it->second;
  };
  auto scalar = [&](const char* key) {
    auto& v = require(key);
    if (v.size() != 1) throw FormatError(path.string() + ": '" + key + "' must be a scalar");
    return v.front();
  };

  SpeakerStats s;
  s.logf0_mean = scalar("logf0_mean");
  s.logf0_var = scalar("logf0_var");
  s.mcep_mean = std::move(require("mcep_mean"));
  s.mcep_var = std::move(require("mcep_var"));
  s.gv = std::move(require("gv"));
  try {
    s.validate();
  } catch (const StatisticsError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return s;
}

void write_f0(const F0Contour& f0, const std::filesystem::path& path) {
  std::string out;
  for (double v : f0.values) out += format_double(v) + "\n";
  dump(out, path);
}

F0Contour read_f0(const std::filesystem::path& path, double frame_shift_s) {
  const auto bytes = slurp(path);
  std::istringstream lines(std::string(bytes.begin(), bytes.end()));
  F0Contour f0;
  f0.frame_shift_s = frame_shift_s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const double v = parse_double(body, where);
    if (!std::isfinite(v) || v < 0.0) throw FormatError(where + ": F0 must be finite and >= 0");
    f0.values.push_back(v);
  }
  return f0;
}

void write_envelope(const EnvelopeSignal& env, const std::filesystem::path& path) {
  std::string out;
  out.reserve(env.size() * 16);
  for (std::size_t i = 0; i < env.size(); ++i) {
    out += std::to_string(i);
    out += ' ';
    out += format_double(env.values[i]);
    out += '\n';
  }
  dump(out, path);
}

}  // namespace resvc
