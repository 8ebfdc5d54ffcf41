#pragma once

#include <utility>
#include <vector>

#include "rollupgames/params.hpp"

namespace rollupgames {

struct PayoffRow {
    double aggregator = 0.0;
    std::vector<double> validators;
};

// Single-validator game cell (aggregator money, validator money).
// All three validator actions are admissible here.
std::pair<double, double> payoff_single(const GameParams& p, AggregatorAction a,
                                        ValidatorAction v);

// n-validator game cell. Fraud is detected iff at least one validator
// verifies; a detected aggregator loses S and the slashed pool delta*S is
// split among the verifiers; free-riders caught alongside a detected attack
// lose f_p*V. Blind challenges are rejected (single-validator game only).
PayoffRow payoff_multi(const GameParams& p, AggregatorAction a,
                       const std::vector<ValidatorAction>& actions);

// Non-KYC variant cell: validator i stakes V_max when verifying and
// deposits[i] when free-riding; honest-round rewards are split
// proportionally to stakes instead of evenly.
PayoffRow payoff_nonkyc(const GameParams& p, double V_max,
                        const std::vector<double>& deposits, AggregatorAction a,
                        const std::vector<ValidatorAction>& actions);

}  // namespace rollupgames
