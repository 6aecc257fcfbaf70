#pragma once

#include <stdexcept>
#include <string>

namespace asvgd {

// Values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  kValidation = 1,
  kNumerical = 2,
  kIo = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace asvgd
