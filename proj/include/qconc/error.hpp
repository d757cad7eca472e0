#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qconc {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  NotSymmetric,
  ConvergenceFailure,
  NotNormalized,
  ZeroState,
  DimensionMismatch,
  NumericalInconsistency,
  ProfileMismatch,
  BadSpectrum,
  OutOfRange,
  DegeneratePoint,
  OffCurve,
  BadTrace,
  BadShape,
  BadIndex,
  RankViolation,
  UnsupportedFamily,
  NotFormA,
  NotIsometry,
  BadRank,
  ParseError,
  ValidationError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorCode::ProfileMismatch: return "ProfileMismatch";
    case ErrorCode::BadSpectrum: return "BadSpectrum";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegeneratePoint: return "DegeneratePoint";
    case ErrorCode::OffCurve: return "OffCurve";
    case ErrorCode::BadTrace: return "BadTrace";
    case ErrorCode::BadShape: return "BadShape";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::RankViolation: return "RankViolation";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::NotFormA: return "NotFormA";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qconc
