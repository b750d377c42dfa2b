#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy mirrored by the CLI exit codes: InputError and its
// subclasses exit with 2 (bad usage, unreadable or incompatible inputs),
// every other diimap::Error exits with 1 (domain errors such as an empty
// reference mask).

namespace diimap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public InputError {
public:
    using InputError::InputError;
};

/// File exists but is not a supported raster/CSV format or has a corrupt header.
class FormatError : public InputError {
public:
    using InputError::InputError;
};

/// Two rasters or grids that must agree in shape do not.
class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

/// A parameter or config-file value is out of its documented domain.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// The before mask has no feature pixels region-wide; the impact index
/// denominator is undefined.
class EmptyReference : public Error {
public:
    using Error::Error;
};

}  // namespace diimap
