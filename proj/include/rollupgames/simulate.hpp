#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rollupgames/params.hpp"

namespace rollupgames {

struct ActionStats {
    std::uint64_t rounds = 0;
    double mean = 0.0;
    double se = 0.0;
};

struct ValidatorStats {
    double mean = 0.0;
    double se = 0.0;
    std::map<std::string, ActionStats> by_action;
};

struct SimulationReport {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    double mean_utility_aggregator = 0.0;
    double se_aggregator = 0.0;
    std::vector<ValidatorStats> mean_utility_validators;
    double empirical_loss_per_round = 0.0;
    double se_loss = 0.0;
    double attack_rate = 0.0;
    double detection_rate = 0.0;  // detected attacks / attacks, 0 when no attacks
};

// Samples `rounds` independent rounds of the profile. Deterministic in
// (seed, rounds, profile): draws come from a counter-based generator keyed on
// (seed, round, player) and moments are merged in fixed chunk order, so the
// report is bit-identical for any `threads`.
SimulationReport simulate(const GameParams& p, const StrategyProfile& s,
                          std::uint64_t rounds, std::uint64_t seed, int threads = 1);

struct StatCheck {
    std::string name;
    double empirical = 0.0;
    double theoretical = 0.0;
    double se = 0.0;
    double z = 0.0;
    bool ok = false;
};

struct ComparisonReport {
    bool pass = false;
    std::vector<StatCheck> stats;
    std::vector<std::string> warnings;
};

// z-tests every report statistic against the oracle values for (p, s):
// aggregator mean, per-validator means, in-support per-action conditional
// means, attack rate, detection rate, loss per round. A statistic fails when
// |z| > z_threshold; zero-SE statistics must match to 1e-12.
ComparisonReport compare_to_theory(const SimulationReport& rep, const GameParams& p,
                                   const StrategyProfile& s, double z_threshold = 3.0);

}  // namespace rollupgames
