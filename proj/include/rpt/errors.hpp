#pragma once

#include <stdexcept>
#include <string>

namespace rpt {

// Invalid arguments (bad periods, out-of-range windows, dimension mismatches)
// are reported with std::invalid_argument. The types below cover the
// remaining failure classes.

/// Restricted dictionary matrix is not of full column rank.
class SingularSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Covariance estimation failed (too few rows, zero variance).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine did not converge or produced a degenerate result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Line and column are 1-based; column 0 means the
/// error concerns the whole line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t line, std::size_t column,
             const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace rpt
