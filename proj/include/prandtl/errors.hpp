#pragma once

#include <stdexcept>
#include <string>

namespace prandtl {

/// Argument or precondition violated by the caller.
class ContractViolation : public std::logic_error {
  public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// A coordinate or limit lies outside the discretized domain.
class RangeError : public std::out_of_range {
  public:
    explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

/// The single-critical-curve structure of the data is violated
/// (multiple sign changes, mixed root presence across columns, degeneracy).
class HypothesisViolation : public std::runtime_error {
  public:
    explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Initial-data generation produced fields outside the requested bounds.
class GenerationError : public std::runtime_error {
  public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

/// Time integration produced NaN/Inf or exceeded the vorticity ceiling.
class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(const std::string& what, double time)
        : std::runtime_error(what), t(time) {}
    double t;
};

/// A step was refused before being taken (advective CFL violated).
class StepRejected : public std::runtime_error {
  public:
    explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

/// Config file / flag parsing or validation failure.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough usable samples for a fit or verdict.
class InsufficientData : public std::runtime_error {
  public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

} // namespace prandtl
