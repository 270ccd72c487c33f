#pragma once

#include <stdexcept>
#include <string>

namespace pdecon {

// Invalid parameters or mismatched dimensions. Maps to the CLI usage exit code.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an iteration leaves the domain where the model is defined.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pdecon
