#pragma once

#include <stdexcept>
#include <string>

namespace atrahasis {

/// Broad classes of failure. The CLI maps each kind onto a process exit code.
enum class ErrorKind {
  Usage,                 // bad arguments, mismatched fields, malformed input
  Domain,                // mathematically undefined (inverse of zero, ...)
  InfeasibleParameters,  // parameters the construction cannot realize
  AxiomViolation,        // star vectors fail an MDS condition
  InsufficientNodes,     // too few live nodes/helpers/contents
  NoSolution,            // inconsistent linear system
  Io,                    // filesystem or on-disk format problem
  Internal,              // invariant that should be unreachable
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class InfeasibleParameters : public Error {
 public:
  explicit InfeasibleParameters(const std::string& what)
      : Error(ErrorKind::InfeasibleParameters, what) {}
};

class AxiomViolation : public Error {
 public:
  explicit AxiomViolation(const std::string& what) : Error(ErrorKind::AxiomViolation, what) {}
};

class InsufficientNodes : public Error {
 public:
  explicit InsufficientNodes(const std::string& what)
      : Error(ErrorKind::InsufficientNodes, what) {}
};

/// Raised by solve() when A·x = b has no solution. `row` is the index of an
/// equation of the original system that is left with 0 = nonzero.
class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, std::size_t row)
      : Error(ErrorKind::NoSolution, what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorKind::Internal, what) {}
};

}  // namespace atrahasis
