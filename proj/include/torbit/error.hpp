#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torbit {

enum class ErrorKind {
  invalid_argument,
  degree_unsupported,
  search_exhausted,
  precision_insufficient,
  reducible_input,
  invalid_lattice,
  invalid_discriminant,
  unsupported,
  singular,
  distance_undefined,
  insufficient_input,
  closing_failed,
  invalid_modulus,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::degree_unsupported: return "degree-unsupported";
    case ErrorKind::search_exhausted: return "search-exhausted";
    case ErrorKind::precision_insufficient: return "precision-insufficient";
    case ErrorKind::reducible_input: return "reducible-input";
    case ErrorKind::invalid_lattice: return "invalid-lattice";
    case ErrorKind::invalid_discriminant: return "invalid-discriminant";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::singular: return "singular";
    case ErrorKind::distance_undefined: return "distance-undefined";
    case ErrorKind::insufficient_input: return "insufficient-input";
    case ErrorKind::closing_failed: return "closing-failed";
    case ErrorKind::invalid_modulus: return "invalid-modulus";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI)
/// can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace torbit
