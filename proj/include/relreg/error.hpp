#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relreg {

//! Every failure raised by the library carries one of these codes; the CLI
//! prints the code name and maps it to exit status 2.
enum class ErrorCode
{
  MissingFile,
  ParseError,
  InvalidDelta,
  EmptyDataset,
  IoError,
  InvalidSampleSize,
  NonPositiveBandwidth,
  NonPositiveSigma,
  NonPositiveRate,
  NonPositiveResponse,
  ZeroSurvivalMass,
  DegenerateDenominator,
  OutOfDomain,
  NonPositiveResponseGenerated,
  CountExceedsSample,
  NoConvergence,
  NoDefinedPoints,
  TooFewValidReplications,
  EmptySample,
  MalformedInput,
  InvalidArgument
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message)
    , code_(code)
  {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

//! Raised by load_csv; line numbers are 1-based and count the header.
class ParseError : public Error
{
public:
  ParseError(std::size_t line, std::size_t column, const std::string& token);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

} // namespace relreg
