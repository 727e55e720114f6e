#include "relreg/error.hpp"

namespace relreg {

std::string_view
to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::MissingFile:
      return "MissingFile";
    case ErrorCode::ParseError:
      return "ParseError";
    case ErrorCode::InvalidDelta:
      return "InvalidDelta";
    case ErrorCode::EmptyDataset:
      return "EmptyDataset";
    case ErrorCode::IoError:
      return "IoError";
    case ErrorCode::InvalidSampleSize:
      return "InvalidSampleSize";
    case ErrorCode::NonPositiveBandwidth:
      return "NonPositiveBandwidth";
    case ErrorCode::NonPositiveSigma:
      return "NonPositiveSigma";
    case ErrorCode::NonPositiveRate:
      return "NonPositiveRate";
    case ErrorCode::NonPositiveResponse:
      return "NonPositiveResponse";
    case ErrorCode::ZeroSurvivalMass:
      return "ZeroSurvivalMass";
    case ErrorCode::DegenerateDenominator:
      return "DegenerateDenominator";
    case ErrorCode::OutOfDomain:
      return "OutOfDomain";
    case ErrorCode::NonPositiveResponseGenerated:
      return "NonPositiveResponseGenerated";
    case ErrorCode::CountExceedsSample:
      return "CountExceedsSample";
    case ErrorCode::NoConvergence:
      return "NoConvergence";
    case ErrorCode::NoDefinedPoints:
      return "NoDefinedPoints";
    case ErrorCode::TooFewValidReplications:
      return "TooFewValidReplications";
    case ErrorCode::EmptySample:
      return "EmptySample";
    case ErrorCode::MalformedInput:
      return "MalformedInput";
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
  }
  return "Unknown";
}

ParseError::ParseError(std::size_t line,
                       std::size_t column,
                       const std::string& token)
  : Error(ErrorCode::ParseError,
          "line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": cannot parse '" + token + "'")
  , line_(line)
  , column_(column)
  , token_(token)
{}

} // namespace relreg
