#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Fock-space truncation is inadequate for the requested object, or an
// evolution leaked too much population into the top levels of a mode.
struct TruncationError : Error {
  using Error::Error;
};

// Operands live on incompatible mode dimensions.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A Lindblad decomposition produced a negative rate.
struct InvalidRates : Error {
  using Error::Error;
};

// The integrator could not reach the requested tolerance.
struct StepFailure : Error {
  using Error::Error;
};

// Pump rate below the oscillation threshold where an amplitude was requested.
struct BelowThreshold : Error {
  using Error::Error;
};

// Brute-force enumeration refused (problem too large).
struct TooLarge : Error {
  using Error::Error;
};

// Inconsistent or unknown physical unit tag.
struct UnitError : Error {
  using Error::Error;
};

// A gate simulation left the logical manifold beyond its leakage budget.
struct NonAdiabatic : Error {
  using Error::Error;
};

// Adiabatic branches became too close to track separately.
struct DegeneracyError : Error {
  using Error::Error;
};

// Bad or missing experiment configuration (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace qbm
