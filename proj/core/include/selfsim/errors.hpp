#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class InvalidParameter : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-parameter"; }
};

/// A word or address refers to a digit index that does not exist.
class AddressError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "address"; }
};

/// A requested enumeration exceeds its configured point budget.
class ResourceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resource"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

class ParseError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parse"; }
};

/// An internal consistency check failed (a certificate did not replay).
class ConsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "consistency"; }
};

}  // namespace selfsim
