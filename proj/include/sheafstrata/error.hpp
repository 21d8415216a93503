#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sheafstrata {

enum class ErrorKind {
  degree_mismatch,
  twist_mismatch,
  invalid_presentation,
  not_injective,
  no_stratum_match,
  non_linear_growth,
  parse_error,
  precondition,
  retry_exhausted,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::degree_mismatch: return "degree-mismatch";
    case ErrorKind::twist_mismatch: return "twist-mismatch";
    case ErrorKind::invalid_presentation: return "invalid-presentation";
    case ErrorKind::not_injective: return "not-injective";
    case ErrorKind::no_stratum_match: return "no-stratum-match";
    case ErrorKind::non_linear_growth: return "non-linear-growth";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::retry_exhausted: return "retry-exhausted";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sheafstrata
