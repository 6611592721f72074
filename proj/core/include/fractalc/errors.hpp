#pragma once

#include <stdexcept>
#include <string>

namespace fractalc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or violated precondition (bad ratio, bad depth, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured cap would be exceeded (enumeration cap, depth cap).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a singular point of a profile or coefficient.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: blow-up, overflow, degenerate denominator,
/// unstable step size, or a residual sweep with every point excluded.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fractalc
