#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rollupgames/errors.hpp"

namespace rollupgames {

// One announcement round. The aggregator posts a state update worth Z to an
// attacker and stakes S; each of the n validators may pay C to verify it.
// T is the total verification reward pool per round, B the honest aggregator
// reward, delta the slashing share awarded to successful challengers, V the
// validator deposit, f_p / f_n the deposit fractions lost on false-positive /
// false-negative challenges, lambda the share of a forfeited false-negative
// deposit credited to the aggregator.
struct GameParams {
    double Z = 200.0;
    double S = 100.0;
    double B = 20.0;
    double T = 10.0;
    double C = 8.0;
    double V = 50.0;
    double delta = 0.5;
    double f_p = 0.1;
    double f_n = 0.1;
    double lambda = 1.0;
    int n = 1;
};

// Throws AssumptionViolated unless: Z,S,B,T,C,V >= 0, Z > B, delta*S > T,
// delta,f_p,f_n,lambda in [0,1], n >= 1.
void validate_params(const GameParams& p);

enum class AggregatorAction { honest, attack };
enum class ValidatorAction { verify, free_ride, blind_challenge };

const char* to_string(AggregatorAction a);
const char* to_string(ValidatorAction a);

enum class Variant { kyc, non_kyc, tie_break };

const char* to_string(Variant v);

struct ValidatorMix {
    double alpha = 0.0;  // verify probability
    double gamma = 0.0;  // blind-challenge probability (single-validator game only)
};

struct NonKycProfile {
    double V_max = 0.0;             // deposit staked when verifying
    std::vector<double> deposits;   // deposit staked by each validator when free-riding
};

struct TieBreakProfile {
    double D = 0.0;  // extra damage term scaled by recorded defense level
};

// Mixed strategy profile: aggregator attacks with probability beta, validator i
// verifies with probability alpha_i and blind-challenges with gamma_i.
struct StrategyProfile {
    double beta = 0.0;
    std::vector<ValidatorMix> validators;
    Variant variant = Variant::kyc;
    std::optional<NonKycProfile> non_kyc;
    std::optional<TieBreakProfile> tie_break;
};

// Throws unless the profile is consistent with p: validators.size() == n,
// all probabilities in [0,1] with alpha_i + gamma_i <= 1, gamma_i == 0 unless
// n == 1 and variant == kyc (BlindChallengeUnsupported otherwise), and the
// variant payload present exactly when the variant needs it.
void validate_profile(const GameParams& p, const StrategyProfile& s);

}  // namespace rollupgames
