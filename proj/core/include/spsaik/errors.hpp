#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spsaik {

/// Raised when a caller violates a precondition (dimension mismatch, bad parameter).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the optimizer meets a non-finite loss or gradient estimate.
class SolverFault : public std::runtime_error {
public:
    SolverFault(const std::string& what, std::size_t iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// Unknown scenario id, or a scenario definition that fails validation.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (scenario JSON, CSV, run artifacts).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failures while reading or writing artifacts.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spsaik
