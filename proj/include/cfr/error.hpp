#pragma once

#include <stdexcept>
#include <string>

namespace cfr {

// Error categories. The numeric values of the CLI exit codes live in the
// tool; these only classify failures.
enum class ErrorCode {
  kInvalidParameters,
  kInvalidGame,
  kInvalidInput,
  kInvalidState,
  kGameTooLarge,
  kUnsupportedMode,
  kIo,
  kInternal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameters: return "invalid-parameters";
    case ErrorCode::kInvalidGame: return "invalid-game";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kGameTooLarge: return "game-too-large";
    case ErrorCode::kUnsupportedMode: return "unsupported-mode";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kInternal: return "internal-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace cfr
