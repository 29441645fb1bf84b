#pragma once

#include <stdexcept>
#include <string>

namespace branchforge {

/// Categories map one-to-one onto CLI exit codes and C API status codes.
enum class ErrorKind {
  Verification = 1,
  Precondition = 2,  // also domain and configuration errors
  Resource = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::Precondition, "domain error: " + what) {}
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::Precondition, "precondition violated: " + what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::Precondition, "configuration error: " + what) {}
};

struct ResourceError : Error {
  explicit ResourceError(const std::string& what)
      : Error(ErrorKind::Resource, "resource cap exceeded: " + what) {}
};

struct VerificationError : Error {
  explicit VerificationError(const std::string& what)
      : Error(ErrorKind::Verification, "verification failed: " + what) {}
};

}  // namespace branchforge
