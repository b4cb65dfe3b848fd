#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sympdiv {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch, odd dimension where an even one is required, n = 0.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Singular pairing, degenerate form, singular matrix.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// Cholesky failure. Carries the zero-based index of the failing pivot
// (or npos when the input was rejected before factorization started).
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t pivot_;
};

// A matrix that should be in Sp(2n) is not.
class GroupMembershipError : public Error {
 public:
  using Error::Error;
};

// Evaluation point outside (or on the boundary of) a potential's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Unbounded conjugate supremum or an infinite conjugate where a finite one
// is required.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A divergence came out negative beyond float noise: the generator is not
// convex (or a user-supplied gradient is wrong).
class ConvexityViolation : public Error {
 public:
  using Error::Error;
};

// Brute-force oracle requested in too many dimensions.
class OracleScaleError : public Error {
 public:
  using Error::Error;
};

// Time grid with fewer than two nodes or non-increasing stamps.
class GridError : public Error {
 public:
  using Error::Error;
};

// Job file or potential/form description does not match the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sympdiv
