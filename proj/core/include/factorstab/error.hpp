#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace factorstab {

enum class ErrorCode {
  InvalidInput,
  NumericalFailure,
  RankDeficient,
  DegenerateInput,
  DegenerateColumn,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code is what
/// callers (and the CLI exit status) switch on; the message carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the numerics rather than of the data handed in.
  bool is_numerical() const noexcept {
    return code_ == ErrorCode::NumericalFailure ||
           code_ == ErrorCode::RankDeficient;
  }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::ParseError, what), line_(line), column_(column) {}

  // 1-based; column 0 means the whole line.
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DegenerateColumn : public Error {
 public:
  DegenerateColumn(std::size_t column, const std::string& what)
      : Error(ErrorCode::DegenerateColumn, what), column_(column) {}

  // 0-based column index.
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

[[noreturn]] void throw_invalid(const std::string& what);

}  // namespace factorstab
