#include "rollupgames/oracle.hpp"

#include <cmath>
#include <cstdint>

#include "rollupgames/extensions.hpp"
#include "rollupgames/payoffs.hpp"

namespace rollupgames {

namespace {

// pmf of the number of verifiers among the validators other than `skip`,
// exact for heterogeneous alphas (iterative convolution).
std::vector<double> others_verify_pmf(const StrategyProfile& s, std::size_t skip) {
    std::vector<double> pmf{1.0};
    for (std::size_t j = 0; j < s.validators.size(); ++j) {
        if (j == skip) continue;
        const double a = s.validators[j].alpha;
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - a);
            next[k + 1] += pmf[k] * a;
        }
        pmf.swap(next);
    }
    return pmf;
}

double validator_eu_enumeration(const GameParams& p, const StrategyProfile& s,
                                std::size_t i, ValidatorAction v) {
    const std::size_t n = s.validators.size();
    if (n > 25) throw ModelError("enumeration backend capped at n <= 25");
    std::vector<ValidatorAction> actions(n);
    const std::size_t others = n - 1;
    double eu = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others); ++mask) {
        double w = 1.0;
        std::size_t bit = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool ver = (mask >> bit) & 1;
            w *= ver ? s.validators[j].alpha : 1.0 - s.validators[j].alpha;
            actions[j] = ver ? ValidatorAction::verify : ValidatorAction::free_ride;
            ++bit;
        }
        if (w == 0.0) continue;
        actions[i] = v;
        for (auto a : {AggregatorAction::honest, AggregatorAction::attack}) {
            const double pa = a == AggregatorAction::attack ? s.beta : 1.0 - s.beta;
            if (pa == 0.0) continue;
            const PayoffRow row =
                s.variant == Variant::non_kyc
                    ? payoff_nonkyc(p, s.non_kyc->V_max, s.non_kyc->deposits, a, actions)
                    : payoff_multi(p, a, actions);
            eu += w * pa * row.validators[i];
        }
    }
    return eu;
}

double validator_eu_single(const GameParams& p, const StrategyProfile& s,
                           ValidatorAction v) {
    const auto hon = payoff_single(p, AggregatorAction::honest, v);
    const auto att = payoff_single(p, AggregatorAction::attack, v);
    return (1.0 - s.beta) * hon.second + s.beta * att.second;
}

double validator_eu_tiebreak(const GameParams& p, const StrategyProfile& s,
                             ValidatorAction v) {
    const TieBreakParams tb{s.tie_break->D};
    const double alpha = s.validators[0].alpha;
    const auto hon = payoff_tiebreak(p, tb, alpha, s.beta, AggregatorAction::honest, v);
    const auto att = payoff_tiebreak(p, tb, alpha, s.beta, AggregatorAction::attack, v);
    return (1.0 - s.beta) * hon.second + s.beta * att.second;
}

}  // namespace

double expected_utility_aggregator(const GameParams& p, const StrategyProfile& s,
                                   AggregatorAction a) {
    if (s.variant == Variant::tie_break) {
        if (a == AggregatorAction::honest) return p.B;
        const double alpha = s.validators[0].alpha;
        const double d = s.tie_break ? s.tie_break->D : 0.0;
        return (1.0 - alpha) * p.Z + alpha * (-p.S - alpha * s.beta * d);
    }
    if (a == AggregatorAction::honest) {
        double eu = p.B;
        for (const auto& v : s.validators) eu += v.gamma * p.lambda * p.f_n * p.V;
        return eu;
    }
    double undetected = 1.0;
    for (const auto& v : s.validators) undetected *= 1.0 - v.alpha - v.gamma;
    return undetected * p.Z - (1.0 - undetected) * p.S;
}

double expected_utility_validator(const GameParams& p, const StrategyProfile& s,
                                  std::size_t i, ValidatorAction v, Backend backend) {
    if (i >= s.validators.size()) throw BadGroupSizes("validator index out of range");
    if (s.variant == Variant::tie_break) {
        if (!s.tie_break) throw ConfigError("tie_break profile payload missing");
        return validator_eu_tiebreak(p, s, v);
    }
    if (s.variant == Variant::non_kyc) {
        if (!s.non_kyc) throw ConfigError("non_kyc profile payload missing");
        return validator_eu_enumeration(p, s, i, v);
    }
    if (p.n == 1) {
        return validator_eu_single(p, s, v);
    }
    if (v == ValidatorAction::blind_challenge) {
        throw BlindChallengeUnsupported(
            "blind challenges exist only in the single-validator base game");
    }
    if (backend == Backend::enumeration) {
        return validator_eu_enumeration(p, s, i, v);
    }
    const auto pmf = others_verify_pmf(s, i);
    const double share = p.T / static_cast<double>(p.n);
    if (v == ValidatorAction::verify) {
        double prize = 0.0;
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            prize += pmf[k] * p.delta * p.S / static_cast<double>(k + 1);
        }
        return s.beta * prize + (1.0 - s.beta) * share - p.C;
    }
    const double undetected = pmf[0];
    return (1.0 - s.beta) * share +
           s.beta * (undetected * share - (1.0 - undetected) * p.f_p * p.V);
}

std::vector<DeviationReport> best_response_check(const GameParams& p,
                                                 const StrategyProfile& s,
                                                 Backend backend) {
    validate_profile(p, s);
    std::vector<DeviationReport> reports;

    {
        DeviationReport rep;
        rep.player = "aggregator";
        const double hon = expected_utility_aggregator(p, s, AggregatorAction::honest);
        const double att = expected_utility_aggregator(p, s, AggregatorAction::attack);
        rep.action_utilities["honest"] = hon;
        rep.action_utilities["attack"] = att;
        const bool hon_in = s.beta < 1.0;
        const bool att_in = s.beta > 0.0;
        const double mix = (1.0 - s.beta) * hon + s.beta * att;
        double lo = 0.0, hi = 0.0;
        bool first = true;
        double best_out = 0.0;
        bool any_out = false;
        for (const auto& [in, eu] : {std::pair{hon_in, hon}, std::pair{att_in, att}}) {
            if (in) {
                lo = first ? eu : std::min(lo, eu);
                hi = first ? eu : std::max(hi, eu);
                first = false;
            } else {
                best_out = any_out ? std::max(best_out, eu) : eu;
                any_out = true;
            }
        }
        rep.support_spread = first ? 0.0 : hi - lo;
        rep.best_deviation_gain = any_out ? std::max(0.0, best_out - mix) : 0.0;
        reports.push_back(std::move(rep));
    }

    const bool blind_admissible = p.n == 1 && s.variant == Variant::kyc;
    for (std::size_t i = 0; i < s.validators.size(); ++i) {
        DeviationReport rep;
        rep.player = "validator[" + std::to_string(i) + "]";
        const double alpha = s.validators[i].alpha;
        const double gamma = s.validators[i].gamma;
        const double free_prob = 1.0 - alpha - gamma;

        const double eu_v =
            expected_utility_validator(p, s, i, ValidatorAction::verify, backend);
        const double eu_f =
            expected_utility_validator(p, s, i, ValidatorAction::free_ride, backend);
        rep.action_utilities["verify"] = eu_v;
        rep.action_utilities["free_ride"] = eu_f;
        double eu_b = 0.0;
        if (blind_admissible) {
            eu_b = expected_utility_validator(p, s, i, ValidatorAction::blind_challenge,
                                              backend);
            rep.action_utilities["blind_challenge"] = eu_b;
        }

        const double mix = alpha * eu_v + free_prob * eu_f + gamma * eu_b;
        double lo = 0.0, hi = 0.0;
        bool first = true;
        double best_out = 0.0;
        bool any_out = false;
        auto account = [&](bool in, double eu) {
            if (in) {
                lo = first ? eu : std::min(lo, eu);
                hi = first ? eu : std::max(hi, eu);
                first = false;
            } else {
                best_out = any_out ? std::max(best_out, eu) : eu;
                any_out = true;
            }
        };
        account(alpha > 0.0, eu_v);
        account(free_prob > 0.0, eu_f);
        if (blind_admissible) account(gamma > 0.0, eu_b);
        rep.support_spread = first ? 0.0 : hi - lo;
        rep.best_deviation_gain = any_out ? std::max(0.0, best_out - mix) : 0.0;
        reports.push_back(std::move(rep));
    }
    return reports;
}

bool is_epsilon_equilibrium(const std::vector<DeviationReport>& reports, double eps) {
    for (const auto& r : reports) {
        if (!r.pass(eps)) return false;
    }
    return true;
}

double system_loss(const GameParams& p, const StrategyProfile& s) {
    double undetected = 1.0;
    for (const auto& v : s.validators) undetected *= 1.0 - v.alpha - v.gamma;
    return s.beta * undetected * p.Z;
}

}  // namespace rollupgames
