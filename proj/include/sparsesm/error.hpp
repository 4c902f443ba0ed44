#pragma once

#include <stdexcept>
#include <string>

namespace sparsesm {

enum class ErrorCode {
  EmptyInput,
  NonFiniteEntry,
  DimensionMismatch,
  EmptyActiveSet,
  InvalidMetric,
  SingularMatrix,
  InvalidArgument,
  LengthMismatch,
  RaggedRows,
  NonNumericCell,
  UnknownLabelColumn,
  IoError,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Library error. Row/line/column fields are 1-based; 0 means "not applicable".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0,
        std::size_t column = 0)
      : std::runtime_error(message), code_(code), line_(line), column_(column) {}

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace sparsesm
