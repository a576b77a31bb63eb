#pragma once

#include <stdexcept>
#include <string>

namespace popcheck {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown when an iterative evaluation exhausts its budget before converging.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown registry names, malformed registry strings, bad parameter counts.
class RegistryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace popcheck
