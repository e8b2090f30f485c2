#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optomech {

enum class ErrorCode {
  domain,               // argument outside the mathematical domain
  range,                // intermediate overflow
  config,               // invalid configuration / truncation
  degenerate_subspace,  // projection weight vanished
  precondition,         // e.g. tangle of a mixed state
  no_root,              // bracket without sign change
  regime,               // parameter regime not covered by the chosen method
  undefined             // quantity undefined at this point (e.g. 0/0)
};

std::string_view to_string(ErrorCode code);

/// Base of every error raised by the library. The code is what the sweep
/// runner writes into the per-row error column.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};
class RangeError : public Error {
 public:
  explicit RangeError(const std::string& w) : Error(ErrorCode::range, w) {}
};
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};
class DegenerateSubspaceError : public Error {
 public:
  explicit DegenerateSubspaceError(const std::string& w)
      : Error(ErrorCode::degenerate_subspace, w) {}
};
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& w)
      : Error(ErrorCode::precondition, w) {}
};
class NoRootError : public Error {
 public:
  explicit NoRootError(const std::string& w) : Error(ErrorCode::no_root, w) {}
};
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& w) : Error(ErrorCode::regime, w) {}
};
class UndefinedError : public Error {
 public:
  explicit UndefinedError(const std::string& w)
      : Error(ErrorCode::undefined, w) {}
};

}  // namespace optomech
