#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gfsplit {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct DomainViolation : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NonMonotone : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct InversionFailure : Error { using Error::Error; };

// Inner scalar/vector solve did not converge (index = offending component).
struct NewtonFailure : Error {
  NewtonFailure(std::size_t index, const std::string& what)
      : Error(what), index(index) {}
  std::size_t index;
};

// Raised by run_scheme when a resolvent solve fails at step k.
struct ResolventFailure : Error {
  ResolventFailure(std::size_t step, int which, const std::string& what)
      : Error(what), step(step), which(which) {}
  std::size_t step;  // 1-based scheme step
  int which;         // 1 or 2
};

}  // namespace gfsplit
