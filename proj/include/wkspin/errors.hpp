#pragma once

#include <stdexcept>
#include <string>

namespace wkspin {

enum class ErrorCode {
  DegenerateMetric,
  ZeroScalarCurvature,
  NegativeRadicand,
  SignRuleUndefined,
  CalibrationFailed,
  NoCommonRoot,
  ZeroLambda,
  ZeroSpinor,
  ZeroPoint,
  ZeroK,
  DegenerateInput,
  IdenticallyZero,
  InvalidInput,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateMetric:    return "DegenerateMetric";
    case ErrorCode::ZeroScalarCurvature: return "ZeroScalarCurvature";
    case ErrorCode::NegativeRadicand:    return "NegativeRadicand";
    case ErrorCode::SignRuleUndefined:   return "SignRuleUndefined";
    case ErrorCode::CalibrationFailed:   return "CalibrationFailed";
    case ErrorCode::NoCommonRoot:        return "NoCommonRoot";
    case ErrorCode::ZeroLambda:          return "ZeroLambda";
    case ErrorCode::ZeroSpinor:          return "ZeroSpinor";
    case ErrorCode::ZeroPoint:           return "ZeroPoint";
    case ErrorCode::ZeroK:               return "ZeroK";
    case ErrorCode::DegenerateInput:     return "DegenerateInput";
    case ErrorCode::IdenticallyZero:     return "IdenticallyZero";
    case ErrorCode::InvalidInput:        return "InvalidInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wkspin
