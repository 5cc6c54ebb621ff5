#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zfr {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Topologically invalid mesh: non-manifold faces, dangling boundary records, holes.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Inverted or degenerate element mapping.
class GeometryError : public Error {
 public:
  GeometryError(std::int64_t cell, const std::string& what)
      : Error("cell " + std::to_string(cell) + ": " + what), cell_(cell) {}
  std::int64_t cell() const noexcept { return cell_; }

 private:
  std::int64_t cell_;
};

/// Non-physical conserved state (negative density or internal energy).
class StateError : public Error {
 public:
  explicit StateError(const std::string& what, std::int64_t cell = -1)
      : Error(what), cell_(cell) {}
  std::int64_t cell() const noexcept { return cell_; }

 private:
  std::int64_t cell_;
};

/// Failure inside a cross-rank exchange (transport error, timeout, remote abort).
class ExchangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent file content.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Text parse failure carrying the offending line number.
class ParseError : public FormatError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace zfr
