#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spm {

/// Malformed input data: bad pattern files, unscoreable alignments,
/// undecodable codes. The CLI maps these to exit status 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A symbol has no entry in the cost table.
class CostError : public DataError {
 public:
  using DataError::DataError;
};

class DecodeError : public DataError {
 public:
  using DataError::DataError;
};

/// A merge or alignment construction step violated an alignment invariant.
class AlignmentError : public DataError {
 public:
  using DataError::DataError;
};

/// I/O failure; exit status 3 in the CLI.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spm
