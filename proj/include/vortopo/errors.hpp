#ifndef VORTOPO_ERRORS_HPP
#define VORTOPO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vortopo {

// Error categories map to CLI exit codes: config -> 2, regime -> 3,
// numeric/domain -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RegimeOutOfRangeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// field_core
struct OnAxisError : NumericError {
  using NumericError::NumericError;
};

// topology
struct NotCriticalError : NumericError {
  using NumericError::NumericError;
};

// tracer
struct SeedOnAxisError : NumericError {
  using NumericError::NumericError;
};
struct SeedAtCriticalError : NumericError {
  using NumericError::NumericError;
};
struct StepFailureError : NumericError {
  using NumericError::NumericError;
};

// surface_mesh
struct SeparatrixTooCloseError : NumericError {
  using NumericError::NumericError;
};
struct NotCompactError : NumericError {
  using NumericError::NumericError;
};
struct NotWatertightError : NumericError {
  using NumericError::NumericError;
};

// perturb_general
struct OutOfRangeError : NumericError {
  using NumericError::NumericError;
};
struct EmptySpectrumError : NumericError {
  using NumericError::NumericError;
};
struct NoN1ModeError : NumericError {
  using NumericError::NumericError;
};
struct NuTooLargeError : NumericError {
  using NumericError::NumericError;
};
struct ZeroMeanSpectrumError : NumericError {
  using NumericError::NumericError;
};

// cli_io
struct EmptyDataError : NumericError {
  using NumericError::NumericError;
};

}  // namespace vortopo

#endif
