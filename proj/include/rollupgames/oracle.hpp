#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rollupgames/params.hpp"

namespace rollupgames {

inline constexpr double kDefaultEps = 1e-9;

// binomial_sum: closed sums over the count of verifying opponents, exact for
// every n. enumeration: direct expectation over all 2^(n-1) opponent action
// vectors; exact but exponential, capped at n <= 25.
enum class Backend { binomial_sum, enumeration };

double expected_utility_aggregator(const GameParams& p, const StrategyProfile& s,
                                   AggregatorAction a);

double expected_utility_validator(const GameParams& p, const StrategyProfile& s,
                                  std::size_t i, ValidatorAction v,
                                  Backend backend = Backend::binomial_sum);

// Per-player indifference / deviation audit against the profile's mixture value.
struct DeviationReport {
    std::string player;  // "aggregator" or "validator[i]"
    std::map<std::string, double> action_utilities;
    double support_spread = 0.0;       // max - min utility over in-support actions
    double best_deviation_gain = 0.0;  // max out-of-support utility minus mixture value, floored at 0
    bool pass(double eps) const { return support_spread <= eps && best_deviation_gain <= eps; }
};

std::vector<DeviationReport> best_response_check(const GameParams& p,
                                                 const StrategyProfile& s,
                                                 Backend backend = Backend::binomial_sum);

bool is_epsilon_equilibrium(const std::vector<DeviationReport>& reports, double eps);

// Expected externalized damage per round: beta * Pr[no challenger] * Z.
double system_loss(const GameParams& p, const StrategyProfile& s);

}  // namespace rollupgames
