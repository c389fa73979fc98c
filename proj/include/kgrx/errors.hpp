#pragma once

#include <stdexcept>
#include <string>

namespace kgrx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message carries the file and line number.
struct ParseError : Error {
    using Error::Error;
};

// Inputs violate a documented precondition or data invariant.
struct ValidationError : Error {
    using Error::Error;
};

struct NotFoundError : Error {
    using Error::Error;
};

// Non-finite values where finite math is required.
struct NumericError : Error {
    using Error::Error;
};

// Degenerate statistical input (zero variance, empty complement, no events).
struct DegenerateError : Error {
    using Error::Error;
};

// Negative sampling ran out of candidates.
struct ExhaustionError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

}  // namespace kgrx
