#ifndef QFLK_ERRORS_HPP
#define QFLK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qflk {

// All recoverable failures derive from Error so the CLI can map them to
// exit codes (config errors vs numerical failures).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct ParamError : ConfigError {
  using ConfigError::ConfigError;
};

struct NumericalError : Error {
  using Error::Error;
};
struct VacuumError : NumericalError {
  using NumericalError::NumericalError;
};
struct BlowupError : NumericalError {
  using NumericalError::NumericalError;
};
struct WindingError : NumericalError {
  using NumericalError::NumericalError;
};
struct NotGradientError : NumericalError {
  using NumericalError::NumericalError;
};
struct MassMismatchError : NumericalError {
  using NumericalError::NumericalError;
};
struct DegenerateError : NumericalError {
  using NumericalError::NumericalError;
};
struct GridMismatchError : NumericalError {
  using NumericalError::NumericalError;
};
struct MissingDataError : Error {
  using Error::Error;
};

}  // namespace qflk

#endif
