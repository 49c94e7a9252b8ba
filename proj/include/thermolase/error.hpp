#pragma once

#include <stdexcept>
#include <string>

namespace thermolase {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Requested peak intensity exceeds what the beam delivers at focus.
class UnreachableIntensity : public DomainError {
public:
    using DomainError::DomainError;
};

// Surface frame too short for the conduction stencil.
class InsufficientSamples : public DomainError {
public:
    using DomainError::DomainError;
};

// Non-finite temperature after a plant step.
class NumericalBlowup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or missing configuration entry. `key()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace thermolase
