#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace longwave {

/** Base class for all contract violations raised by this library.
 *
 *  Each error carries a stable symbolic name so drivers and tests can match
 *  on the failure kind without parsing the human-readable message. */
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define LONGWAVE_DEFINE_ERROR(NAME)                                    \
  class NAME : public Error {                                          \
   public:                                                             \
    explicit NAME(const std::string& what) : Error(#NAME, what) {}     \
  };

/** Cell problem right-hand side has a nonzero torus mean. */
LONGWAVE_DEFINE_ERROR(NonZeroMeanRHS)
/** Iterative solver failed to reach the requested tolerance. */
LONGWAVE_DEFINE_ERROR(NoConvergence)
/** Requested expansion order exceeds what the implementation supports. */
LONGWAVE_DEFINE_ERROR(OrderTooLarge)
/** A time derivative of the source or a profile is needed beyond its
 *  smoothness class. */
LONGWAVE_DEFINE_ERROR(InsufficientDerivatives)
/** A corrector table does not reach the order required by a consumer. */
LONGWAVE_DEFINE_ERROR(TableTooShallow)
/** The degree-2 homogenized operator is degenerate (no positive mass or
 *  no elliptic spatial part). */
LONGWAVE_DEFINE_ERROR(DegenerateA2)
/** epsilon is too large for the filtered dispersion relation to be positive
 *  on the retained frequency band. */
LONGWAVE_DEFINE_ERROR(EpsilonTooLarge)
/** Waves would reach the periodic box boundary before the final time. */
LONGWAVE_DEFINE_ERROR(BoxTooSmall)
/** Explicit time step violates the stability limit. */
LONGWAVE_DEFINE_ERROR(CFLViolation)
/** A field was requested at a time that was not stored. */
LONGWAVE_DEFINE_ERROR(TimeNotStored)
/** Growth-rate fit window is too short to be meaningful. */
LONGWAVE_DEFINE_ERROR(WindowTooShort)
/** Malformed or inconsistent run configuration. */
LONGWAVE_DEFINE_ERROR(BadConfig)
/** Malformed input data (coefficients, files, arguments). */
LONGWAVE_DEFINE_ERROR(BadInput)

#undef LONGWAVE_DEFINE_ERROR

}  // namespace longwave
