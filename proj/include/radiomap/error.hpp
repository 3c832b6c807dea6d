#ifndef RADIOMAP_ERROR_HPP
#define RADIOMAP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace radiomap {

enum class ErrorCategory {
  invalid_parameter,
  shape,
  corrupt_file,
  version_mismatch,
  io,
  config,
  empty_evaluation,
  non_finite,
};

inline std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_parameter: return "invalid_parameter";
    case ErrorCategory::shape: return "shape";
    case ErrorCategory::corrupt_file: return "corrupt_file";
    case ErrorCategory::version_mismatch: return "version_mismatch";
    case ErrorCategory::io: return "io";
    case ErrorCategory::config: return "config";
    case ErrorCategory::empty_evaluation: return "empty_evaluation";
    case ErrorCategory::non_finite: return "non_finite";
  }
  return "unknown";
}

/// All library failures are reported through this type; `category()` is
/// stable and machine-parsable, `what()` carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

inline void require(bool condition, ErrorCategory category, const std::string& message) {
  if (!condition) fail(category, message);
}

}  // namespace radiomap

#endif  // RADIOMAP_ERROR_HPP
