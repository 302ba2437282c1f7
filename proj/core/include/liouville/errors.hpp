#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid mode count, truncation, or mismatched matrix sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Mode or block index outside the valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Operands built over different Fock bases.
class BasisError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A solve that cannot proceed (singular system, failed normalization).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace liouville
