#pragma once

#include <stdexcept>
#include <string>

namespace tsclust {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition or malformed data. CLI exit code 2.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error(what) {}
};

/// Structurally valid but numerically degenerate input (all-zero window,
/// zero-variance composite, zero similarity row sum).
class DegenerateInputError : public ContractError {
public:
    explicit DegenerateInputError(const std::string& what) : ContractError(what) {}
};

/// Not enough history to form a trailing window at the requested time step.
class InsufficientHistoryError : public ContractError {
public:
    explicit InsufficientHistoryError(const std::string& what) : ContractError(what) {}
};

/// Problem size exceeds an enumeration guard or work budget. CLI exit code 3.
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what) : Error(what) {}
};

} // namespace tsclust
