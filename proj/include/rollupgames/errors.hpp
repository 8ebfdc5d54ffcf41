#pragma once

#include <stdexcept>
#include <string>

namespace rollupgames {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter set breaks a standing model assumption. `reason` is a stable
// machine-readable code: "deltaS_le_T", "Z_le_B", "<field>_out_of_range",
// "<field>_negative", "n_lt_1", "V_order".
struct AssumptionViolated : ModelError {
    std::string reason;
    AssumptionViolated(std::string reason_, const std::string& detail)
        : ModelError(reason_ + ": " + detail), reason(std::move(reason_)) {}
};

// Blind challenges exist only in the single-validator game.
struct BlindChallengeUnsupported : ModelError {
    using ModelError::ModelError;
};

// k / m / n combination out of range for the requested computation.
struct BadGroupSizes : ModelError {
    using ModelError::ModelError;
};

// Damage ratio A = (B+S)/(Z+S) outside (0,1); downstream formulas lose meaning.
struct DegenerateA : ModelError {
    using ModelError::ModelError;
};

// Mixing-probability denominator is not positive.
struct NegativeDenominator : ModelError {
    using ModelError::ModelError;
};

// Closed-form beta came out non-positive.
struct NegativeBeta : ModelError {
    using ModelError::ModelError;
};

// Root search found no admissible root in the search interval.
struct NoAdmissibleRoot : ModelError {
    using ModelError::ModelError;
};

// A denominator in the root bookkeeping vanished.
struct SingularDenominator : ModelError {
    using ModelError::ModelError;
};

// Iterative refinement failed to reach tolerance.
struct NoConvergence : ModelError {
    using ModelError::ModelError;
};

// Malformed config / profile / CLI input.
struct ConfigError : ModelError {
    using ModelError::ModelError;
};

}  // namespace rollupgames
