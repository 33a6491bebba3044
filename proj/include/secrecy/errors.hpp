#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete subclass onto its exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
    virtual const char* kind() const noexcept { return "error"; }
};

class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
    const char* kind() const noexcept override { return "usage"; }
};

// Bad input: out-of-range table entries, alphabet mismatches, sequences that
// are not members of the declared class, and so on.
class ValidationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
    const char* kind() const noexcept override { return "validation"; }
};

// A configured enumeration or counting budget would be exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
    const char* kind() const noexcept override { return "budget"; }
};

// Malformed or truncated bitstreams, headers and cryptograms.
class IntegrityError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
    const char* kind() const noexcept override { return "integrity"; }
};

}  // namespace secrecy
