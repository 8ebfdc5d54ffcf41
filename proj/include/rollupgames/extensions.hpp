#pragma once

#include <utility>

#include "rollupgames/closed_form.hpp"
#include "rollupgames/params.hpp"

namespace rollupgames {

// Deposit menu when validators choose their own stake: a verifier stakes
// V_max (dominant), a free-rider stakes V_star in [V_min, V_max].
struct NonKycParams {
    double V_min = 0.0;
    double V_max = 0.0;
    double V_star = 0.0;
};

void validate_nonkyc(const NonKycParams& nk);

// Two-validator symmetric equilibrium under stake-proportional rewards.
// Throws NegativeDenominator / NegativeBeta when the mixing formula breaks.
EquilibriumResult nonkyc_two_validator_equilibrium(const GameParams& p,
                                                   const NonKycParams& nk);

// Tie-break extension: a detected attack still costs the ecosystem
// alpha*beta*D extra (D may be negative), charged to the aggregator.
struct TieBreakParams {
    double D = 0.0;
};

// Single-validator tie-break cell; the (attack, verify) aggregator entry
// becomes -S - alpha*beta*D at the recorded defense level. No blind
// challenges in this variant.
std::pair<double, double> payoff_tiebreak(const GameParams& p, const TieBreakParams& tb,
                                          double alpha, double beta, AggregatorAction a,
                                          ValidatorAction v);

// Aggregator first-order condition 2 beta D alpha^2 + (Z+S) alpha + (B-Z) = 0,
// solved for the root continuous in D -> 0 (the baseline (Z-B)/(Z+S)).
// Z is passed separately so the derivative below can probe it.
double tiebreak_alpha(const GameParams& p, const TieBreakParams& tb, double beta,
                      double Z);

struct TieBreakDerivative {
    double dEA_dZ = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

// d/dZ of the aggregator's equilibrium payoff E_A = B + alpha^2 beta^2 D,
// with beta = C/(delta S - T) fixed by validator indifference.
TieBreakDerivative tiebreak_dEA_dZ(const GameParams& p, const TieBreakParams& tb,
                                   double Z);

// Stationary tie-break profile packaged like the other equilibria. Verified
// by validator indifference plus the FOC residual, not best_response_check.
EquilibriumResult tiebreak_equilibrium(const GameParams& p, const TieBreakParams& tb);

}  // namespace rollupgames
