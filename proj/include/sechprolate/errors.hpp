#pragma once

#include <stdexcept>
#include <string>

namespace sechprolate {

// Exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UntrustedIndexError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace sechprolate
