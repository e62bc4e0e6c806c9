#pragma once

#include <stdexcept>
#include <string>

namespace twosided {

/// Argument outside the supported domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or closed form hit a (near) zero denominator.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient extraction left an imaginary residual above the guard.
class ExtractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical oracle could not reach its precision budget.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twosided
