#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rollupgames/params.hpp"

namespace rollupgames {

// A = (B+S)/(Z+S), the undetected-attack probability every equilibrium pins
// the aggregator to. Throws DegenerateA outside (0,1).
double damage_ratio(const GameParams& p);

// R = (T/n + f_p V) / (delta S): a free-rider's stake in someone else
// catching the fraud, relative to the challenger prize.
double challenge_reward_ratio(const GameParams& p);

// alpha_m = 1 - A^(1/m): common verify probability of m mixers keeping the
// aggregator indifferent.
double alpha_sym(double A, int m);

// P_m = E[1/(1+K)], K ~ Binomial(m-1, alpha_m): expected challenger-prize
// share of a verifying mixer. Q_m = Pr[K = 0]: chance the other mixers all
// pass. Both equal 1 at m = 1.
double P_coeff(double A, int m);
double Q_coeff(double A, int m);

// Delta_m = (P_m - P_{m+1}) / (Q_m - Q_{m+1}); Gamma_m is the free-rider
// no-entry threshold, Gamma_0 = 0. A free-rider outside an m-mixer
// equilibrium stays out iff R <= Gamma_m.
double Delta_coeff(double A, int m);
double Gamma_coeff(double A, int m);

// Attack probability making an m-mixer indifferent between verifying and
// free-riding. Throws NegativeDenominator when the indifference denominator
// is not positive.
double beta_sym(const GameParams& p, int m);

// Verification cost below which the single validator verifies (rather than
// blind-challenges) in equilibrium.
double critical_verification_cost(const GameParams& p);

struct DerivedQuantities {
    double A = 0.0;
    double R = 0.0;
    double P_m = 0.0;
    double Q_m = 0.0;
    double Delta_m = 0.0;
    double Gamma_m = 0.0;
    double alpha_m = 0.0;
    int m = 0;
    int n = 0;
};

DerivedQuantities derived_quantities(const GameParams& p, int m);

enum class EquilibriumKind {
    single_chance_taker,
    single_verifier,
    single_triple_point,
    two_sym,
    two_one_freerider,
    sym_mNE,
    asym,
    nonkyc,
    tie_break,
};

const char* to_string(EquilibriumKind k);

struct FeasibilityEntry {
    std::string condition;  // "beta_positive", "beta_le_1", "R_le_Gamma_m"
    bool satisfied = false;
    double slack = 0.0;     // positive iff satisfied with margin
};

struct EquilibriumResult {
    EquilibriumKind kind{};
    StrategyProfile profile;
    int m = 0;  // count of mixed-strategy validators
    std::vector<FeasibilityEntry> feasibility;
    double loss = 0.0;
};

// First unsatisfied feasibility condition of an m-mixer candidate.
struct Infeasible {
    std::string condition;
    double slack = 0.0;  // negative: amount by which the condition fails
    double beta = 0.0;   // candidate beta, for diagnostics
};

using MneResult = std::variant<EquilibriumResult, Infeasible>;

// n == 1. One equilibrium on either side of C* = critical_verification_cost,
// three at |C - C*| <= 1e-9 * max(1, C*): verifier, chance-taker, and the
// midpoint of the mixed segment joining them.
std::vector<EquilibriumResult> single_validator_equilibria(const GameParams& p);

// n == 2: the symmetric mixed equilibrium, plus the one-free-rider
// equilibrium when R <= 1/2.
std::vector<EquilibriumResult> two_validator_equilibria(const GameParams& p);

// Symmetric candidate with m of the n validators mixing and the rest
// free-riding. Feasibility: beta in (0,1], and R <= Gamma_m when m < n.
MneResult symmetric_mne(const GameParams& p, int m);

struct MneRow {
    int m = 0;
    DerivedQuantities dq;
    MneResult result;
};

// One row per m = 1..n, feasible or not.
std::vector<MneRow> enumerate_symmetric_rows(const GameParams& p);

// The feasible subset, ascending m.
std::vector<EquilibriumResult> enumerate_symmetric_equilibria(const GameParams& p);

}  // namespace rollupgames
