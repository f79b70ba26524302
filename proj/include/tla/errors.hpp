#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tla {

// Numeric values double as CLI exit codes.
enum class ErrorCode : int {
  Config = 1,
  NonCentral = 2,
  SelftestFailed = 3,
  Numerical = 4,
  Lattice = 5,
  Presentation = 6,
  Evaluation = 7,
  Groupoid = 8,
  InvalidArgument = 9,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& message) : Error(ErrorCode::Evaluation, message) {}
};

}  // namespace tla
