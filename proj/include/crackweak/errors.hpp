#pragma once

#include <stdexcept>
#include <string>

namespace crackweak {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape-level problems: mismatched dimensions, misaligned lists,
/// pixel buffers of the wrong length.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A knob was set to an invalid value (threshold outside [0,1],
/// non-positive sigma, weights that do not sum to one, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data is unusable (empty precise mask, empty score list,
/// out-of-range pixel values).
class InputError : public Error {
public:
    using Error::Error;
};

/// A referenced file does not exist or cannot be opened.
class FileMissingError : public Error {
public:
    using Error::Error;
};

/// A file exists but has the wrong format (not a PNG, wrong color type,
/// unsupported bit depth, malformed manifest).
class FileFormatError : public Error {
public:
    using Error::Error;
};

}  // namespace crackweak
