#pragma once

#include <stdexcept>
#include <string>

namespace graphfuse {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix/vector dimension mismatch. Messages name both shapes.
struct ShapeError : Error {
    using Error::Error;
};

/// Malformed file content (bad magic, truncation, non-finite payload, ...).
struct FormatError : Error {
    using Error::Error;
};

/// Invalid configuration or argument value (lambda out of range, bad rates, ...).
struct ParamError : Error {
    using Error::Error;
};

/// Well-formed input whose content violates a dataset invariant.
struct DataError : Error {
    using Error::Error;
};

/// Non-finite values where finite ones are required (divergence, bad objective).
struct NumericError : Error {
    using Error::Error;
};

}  // namespace graphfuse
