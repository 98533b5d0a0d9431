#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgrf {

// Error taxonomy shared across modules; the C API maps each type to a status code.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ArityMismatch : Error {
    using Error::Error;
};

struct NonFiniteValue : Error {
    using Error::Error;
};

// Parse-time errors carry the byte offset of the offending token.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct SyntaxError : ParseError {
    using ParseError::ParseError;
};

struct UnknownIdentifier : ParseError {
    using ParseError::ParseError;
};

struct ArityExceeded : ParseError {
    using ParseError::ParseError;
};

struct InvalidArgument : Error {
    using Error::Error;
};

struct EmptyEstimator : Error {
    using Error::Error;
};

struct ExclusionSaturated : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct UnknownBuiltin : Error {
    using Error::Error;
};

} // namespace sgrf
