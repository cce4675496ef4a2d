#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bergman {

enum class ErrorKind {
  ZeroLeadingCoefficient,
  DegreeTooSmall,
  BothZero,
  GrowthViolation,
  MassMismatch,
  ResolutionTooLow,
  TooManyExcludedNodes,
  DivergentNormEntry,
  IllConditioned,
  WeightPole,
  NonConvergence,
  InvalidArgument,
  Config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorKind::BothZero: return "BothZero";
    case ErrorKind::GrowthViolation: return "GrowthViolation";
    case ErrorKind::MassMismatch: return "MassMismatch";
    case ErrorKind::ResolutionTooLow: return "ResolutionTooLow";
    case ErrorKind::TooManyExcludedNodes: return "TooManyExcludedNodes";
    case ErrorKind::DivergentNormEntry: return "DivergentNormEntry";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::WeightPole: return "WeightPole";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

//! Input validation failures (as opposed to numerical breakdown).
constexpr bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::ZeroLeadingCoefficient || kind == ErrorKind::DegreeTooSmall ||
         kind == ErrorKind::BothZero || kind == ErrorKind::InvalidArgument ||
         kind == ErrorKind::Config;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bergman
