#pragma once

#include <stdexcept>

namespace udep {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise malformed input values.
struct InvalidInput : Error {
  using Error::Error;
};

// Zero-variance samples; a constant variable has no usable length scale.
struct DegenerateData : Error {
  using Error::Error;
};

// Fewer samples (or pairs) than the estimator needs.
struct InsufficientData : Error {
  using Error::Error;
};

// Pruning parameter alpha outside [1, L-1].
struct InvalidAlpha : Error {
  using Error::Error;
};

// Pair budget K outside [1, L*(L-1)/2].
struct InvalidBudget : Error {
  using Error::Error;
};

// Mismatched array lengths or out-of-range indices.
struct ShapeError : Error {
  using Error::Error;
};

// Rejected experiment or model configuration.
struct ConfigError : Error {
  using Error::Error;
};

// File read/write failure; message carries the path.
struct IoError : Error {
  using Error::Error;
};

}  // namespace udep
