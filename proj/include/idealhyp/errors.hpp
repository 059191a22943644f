#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace idealhyp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (non-finite input, bad index).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A trigonometric or logarithmic singularity was hit (angle at 0 or pi).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Gluing data or combinatorics that do not describe a valid complex.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, int tet = -1, int face = -1)
      : Error(what), tet_(tet), face_(face) {}
  int tet() const noexcept { return tet_; }
  int face() const noexcept { return face_; }

 private:
  int tet_;
  int face_;
};

/// No angle assignment satisfies the linear constraints.  `certificate`
/// names a subset of constraints that cannot hold simultaneously.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> certificate)
      : Error(what), certificate_(std::move(certificate)) {}
  const std::vector<std::string>& certificate() const noexcept { return certificate_; }

 private:
  std::vector<std::string> certificate_;
};

/// Operation requires a topology the library does not handle (e.g. develop on
/// a non-ball).
class UnsupportedTopologyError : public Error {
 public:
  using Error::Error;
};

/// A geometric certificate failed (developed placement inconsistent).
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant broke; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace idealhyp
