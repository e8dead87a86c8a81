#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stablefit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside its admissible range.
class DomainError : public Error {
 public:
  DomainError(std::string parameter, const std::string& message)
      : Error(message), parameter_(std::move(parameter)) {}

  /// Name of the offending parameter ("alpha", "beta", ...).
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string parameter_;
};

/// Numerical procedure (quadrature, root finder, optimizer) did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input data cannot support the requested estimate (e.g. all values equal).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  InsufficientDataError(std::size_t have, std::size_t need, const std::string& what)
      : Error(what + ": need at least " + std::to_string(need) + " observations, got " +
              std::to_string(have)),
        have_(have),
        need_(need) {}

  std::size_t have() const noexcept { return have_; }
  std::size_t need() const noexcept { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

/// Malformed CSV row. Rows are numbered from 1 counting the header line.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string reason)
      : Error("row " + std::to_string(row) + ": " + reason), row_(row), reason_(std::move(reason)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t row_;
  std::string reason_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class EmptyFileError : public Error {
 public:
  using Error::Error;
};

/// Missing or unreadable input file.
class FileError : public Error {
 public:
  explicit FileError(std::string path)
      : Error("cannot open file: " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// McCulloch table asset failed to load or verify.
class TableError : public Error {
 public:
  using Error::Error;
};

}  // namespace stablefit
