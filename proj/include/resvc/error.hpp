#pragma once

#include <stdexcept>
#include <string>

namespace resvc {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or unsupported file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input too short for the requested analysis.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Frame/sample counts or sequence shapes that do not line up.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class StatisticsError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Zero-power or otherwise unusable signal.
class DegenerateSignalError : public Error {
 public:
  using Error::Error;
};

// Wraps a failure inside the conversion pipeline with the stage it came from.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace resvc
