#pragma once

#include <stdexcept>
#include <string>

namespace stopcal {

/// Failure categories surfaced by the library. The CLI maps these to
/// structured error JSON; library code raises them as stopcal::Error.
enum class Errc {
  MalformedRow,
  NonPositivePrice,
  DuplicateTimestamp,
  EmptyFile,
  InvalidParameter,
  InsufficientHistory,
  EmptyWindow,
  EmptyCorpus,
  AllZeroDrawdowns,
  CalibrationUnavailable,
  NonPositiveBaseline,
  LengthMismatch,
  ZeroVariance,
  TooFewSamples,
  EmptyInput,
  ParseError,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace stopcal
