// errors.hpp: exception types shared by the library and the CLI

#pragma once

#include <stdexcept>
#include <string>

namespace phasedir {

// Contract violation in user-supplied input (bad spec, bad config value).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Initial two-site block is not positive semidefinite (a > sqrt(rho_l * rho_r)).
class PositivityError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Site or split index outside the chain.
class BoundsError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Config file could not be parsed; message carries "file:line: ..." context.
class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Propagation produced non-finite values or broke a conservation law.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace phasedir
