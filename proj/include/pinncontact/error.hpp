#pragma once

#include <stdexcept>
#include <string>

namespace pinncontact {

/// Inconsistent sizes, empty point sets, invalid settings.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the optimizers when the objective becomes non-finite.
class TrainingAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pinncontact
