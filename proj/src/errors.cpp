#include "stopcal/errors.hpp"

namespace stopcal {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::NonPositivePrice: return "NonPositivePrice";
    case Errc::DuplicateTimestamp: return "DuplicateTimestamp";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::InsufficientHistory: return "InsufficientHistory";
    case Errc::EmptyWindow: return "EmptyWindow";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::AllZeroDrawdowns: return "AllZeroDrawdowns";
    case Errc::CalibrationUnavailable: return "CalibrationUnavailable";
    case Errc::NonPositiveBaseline: return "NonPositiveBaseline";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace stopcal
