#pragma once

#include <stdexcept>
#include <string>

namespace ensembleseed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Caller passed arguments that violate an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace ensembleseed
