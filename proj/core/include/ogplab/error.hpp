#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ogplab {

/// Invalid or mutually inconsistent input parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A randomized generator gave up after exhausting its retry budget.
class GenerationError : public std::runtime_error {
public:
    GenerationError(const std::string& what, std::uint64_t attempts)
        : std::runtime_error(what + " (after " + std::to_string(attempts) + " attempts)"),
          attempts_(attempts) {}

    std::uint64_t attempts() const noexcept { return attempts_; }

private:
    std::uint64_t attempts_;
};

/// A caller broke an operation's precondition (size mismatch, wrong instance kind, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A size cap was exceeded: exhaustive/statevector limits, member-set overflow.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Experiment configuration is malformed or incomplete.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A requested record or index does not exist.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Text input could not be parsed.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ogplab
