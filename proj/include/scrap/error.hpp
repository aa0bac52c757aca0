#pragma once

#include <stdexcept>
#include <string>

namespace scrap {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or model invariant was violated by the caller's inputs.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The integration produced (or was handed) something non-finite.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace scrap
