#pragma once

#include <stdexcept>
#include <string>

namespace fluor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that are well-formed but violate a precondition (bad grid, degenerate
/// basis, Stokes ordering, shape mismatch...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Missing or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fluor
