#pragma once

#include <stdexcept>
#include <string>

namespace rcp {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Parameters outside the range where a bound or construction applies.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested structure exceeds the configured memory/column budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The law lacks an evaluator the operation needs (density, hazard).
struct UnsupportedLawError : PreconditionError {
  using PreconditionError::PreconditionError;
};

// Malformed or version-mismatched sample dump.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rcp
