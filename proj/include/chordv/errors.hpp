#pragma once

#include <stdexcept>
#include <string>

namespace chordv {

// Base of every error raised by the library. The harness maps the three
// subclasses onto process exit codes 1, 2 and 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: shape mismatch, out-of-range parameter, malformed file.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A kernel could not produce a trustworthy answer (SVD/eigen failure,
// rank deficiency, non-finite iterate).
class NumericalError : public Error {
public:
    using Error::Error;
};

// Raised by the pole estimator when the shifted basis is rank deficient.
class ConditioningError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

int exit_code_for(const std::exception& e) noexcept;

} // namespace chordv
