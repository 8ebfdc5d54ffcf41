#include "rollupgames/payoffs.hpp"

#include <cstddef>

namespace rollupgames {

std::pair<double, double> payoff_single(const GameParams& p, AggregatorAction a,
                                        ValidatorAction v) {
    if (a == AggregatorAction::honest) {
        switch (v) {
            case ValidatorAction::verify: return {p.B, p.T - p.C};
            case ValidatorAction::free_ride: return {p.B, p.T};
            default:
                // False challenge: validator forfeits f_n*V, a lambda share of
                // it lands with the aggregator.
                return {p.B + p.lambda * p.f_n * p.V, -p.f_n * p.V};
        }
    }
    switch (v) {
        case ValidatorAction::verify: return {-p.S, p.delta * p.S - p.C};
        case ValidatorAction::free_ride: return {p.Z, p.T};
        default: return {-p.S, p.delta * p.S};
    }
}

PayoffRow payoff_multi(const GameParams& p, AggregatorAction a,
                       const std::vector<ValidatorAction>& actions) {
    if (actions.size() != static_cast<std::size_t>(p.n)) {
        throw BadGroupSizes("need one action per validator");
    }
    std::size_t verifiers = 0;
    for (auto v : actions) {
        if (v == ValidatorAction::blind_challenge) {
            throw BlindChallengeUnsupported(
                "blind challenges exist only in the single-validator base game");
        }
        if (v == ValidatorAction::verify) ++verifiers;
    }
    PayoffRow row;
    row.validators.resize(actions.size());
    const double share = p.T / static_cast<double>(p.n);
    if (a == AggregatorAction::honest || verifiers == 0) {
        row.aggregator = (a == AggregatorAction::honest) ? p.B : p.Z;
        for (std::size_t i = 0; i < actions.size(); ++i) {
            row.validators[i] =
                share - (actions[i] == ValidatorAction::verify ? p.C : 0.0);
        }
        return row;
    }
    // Detected attack: stake slashed, prize split among the verifiers,
    // free-riders lose the false-positive deposit fraction.
    row.aggregator = -p.S;
    const double prize = p.delta * p.S / static_cast<double>(verifiers);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        row.validators[i] =
            (actions[i] == ValidatorAction::verify) ? prize - p.C : -p.f_p * p.V;
    }
    return row;
}

PayoffRow payoff_nonkyc(const GameParams& p, double V_max,
                        const std::vector<double>& deposits, AggregatorAction a,
                        const std::vector<ValidatorAction>& actions) {
    if (actions.size() != static_cast<std::size_t>(p.n) ||
        deposits.size() != actions.size()) {
        throw BadGroupSizes("need one action and one deposit per validator");
    }
    std::size_t verifiers = 0;
    double total_stake = 0.0;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (actions[i] == ValidatorAction::blind_challenge) {
            throw BlindChallengeUnsupported("no blind challenges in the non-KYC game");
        }
        if (actions[i] == ValidatorAction::verify) {
            ++verifiers;
            total_stake += V_max;
        } else {
            total_stake += deposits[i];
        }
    }
    PayoffRow row;
    row.validators.resize(actions.size());
    if (a == AggregatorAction::honest || verifiers == 0) {
        row.aggregator = (a == AggregatorAction::honest) ? p.B : p.Z;
        for (std::size_t i = 0; i < actions.size(); ++i) {
            const bool ver = actions[i] == ValidatorAction::verify;
            const double stake = ver ? V_max : deposits[i];
            const double reward = total_stake > 0.0 ? p.T * stake / total_stake : 0.0;
            row.validators[i] = reward - (ver ? p.C : 0.0);
        }
        return row;
    }
    row.aggregator = -p.S;
    const double prize = p.delta * p.S / static_cast<double>(verifiers);
    for (std::size_t i = 0; i < actions.size(); ++i) {
        row.validators[i] = (actions[i] == ValidatorAction::verify)
                                ? prize - p.C
                                : -p.f_p * deposits[i];
    }
    return row;
}

}  // namespace rollupgames
