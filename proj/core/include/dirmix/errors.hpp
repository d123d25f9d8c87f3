#pragma once

#include <stdexcept>
#include <string>

namespace dirmix {

// Every failure the tool can report maps onto one of these categories; the
// CLI turns the category into its exit status.
enum class ErrorKind {
  kConfig = 2,
  kCapExceeded = 3,
  kSearchExhausted = 4,
  kUnsupportedKronecker = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed input: bad scalar text, dimension mismatch, invalid event or
/// partition, unresolved config name.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what)
      : Error(ErrorKind::kCapExceeded, what) {}
};

class SearchExhausted : public Error {
 public:
  explicit SearchExhausted(const std::string& what)
      : Error(ErrorKind::kSearchExhausted, what) {}
};

class UnsupportedKronecker : public Error {
 public:
  explicit UnsupportedKronecker(const std::string& what)
      : Error(ErrorKind::kUnsupportedKronecker, what) {}
};

}  // namespace dirmix
