#pragma once

#include <stdexcept>
#include <string>

namespace pcx {

enum class ErrorCode {
  kInvalidInput = 1,
  kInfeasible = 2,
  kBudgetExceeded = 3,
  kDegenerateGuess = 4,
  kSizeGuard = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::kInvalidInput, what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(ErrorCode::kBudgetExceeded, what) {}
};

class DegenerateGuess : public Error {
 public:
  explicit DegenerateGuess(const std::string& what) : Error(ErrorCode::kDegenerateGuess, what) {}
};

class SizeGuard : public Error {
 public:
  explicit SizeGuard(const std::string& what) : Error(ErrorCode::kSizeGuard, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCode::kInternal, what) {}
};

}  // namespace pcx
