#include "rollupgames/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rollupgames/extensions.hpp"
#include "rollupgames/oracle.hpp"
#include "rollupgames/payoffs.hpp"

namespace rollupgames {

namespace {

constexpr std::uint64_t kChunkRounds = 65536;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Counter-based uniform in [0,1): keyed on (seed, draw index), no state, so
// any partition of rounds across threads sees the same numbers.
inline double u01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t z = mix64(seed + 0x9E3779B97F4A7C15ULL * (counter + 1));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        m2 += o.m2 + d * d * static_cast<double>(count) *
                          static_cast<double>(o.count) / total;
        mean += d * static_cast<double>(o.count) / total;
        count += o.count;
    }

    double se() const {
        if (count < 2) return 0.0;
        const double nd = static_cast<double>(count);
        return std::sqrt(m2 / (nd - 1.0) / nd);
    }
};

struct ChunkState {
    Moments agg;
    Moments loss;
    std::vector<Moments> validator;
    std::vector<std::array<Moments, 3>> by_action;
    std::uint64_t attacks = 0;
    std::uint64_t detected = 0;

    explicit ChunkState(std::size_t n) : validator(n), by_action(n) {}

    void merge(const ChunkState& o) {
        agg.merge(o.agg);
        loss.merge(o.loss);
        for (std::size_t i = 0; i < validator.size(); ++i) {
            validator[i].merge(o.validator[i]);
            for (std::size_t a = 0; a < 3; ++a) {
                by_action[i][a].merge(o.by_action[i][a]);
            }
        }
        attacks += o.attacks;
        detected += o.detected;
    }
};

}  // namespace

SimulationReport simulate(const GameParams& p, const StrategyProfile& s,
                          std::uint64_t rounds, std::uint64_t seed, int threads) {
    validate_params(p);
    validate_profile(p, s);
    if (rounds == 0) throw ConfigError("rounds must be positive");
    if (threads < 1) threads = 1;

    const std::size_t n = s.validators.size();
    const std::uint64_t draws_per_round = static_cast<std::uint64_t>(n) + 1;
    const std::uint64_t chunks = (rounds + kChunkRounds - 1) / kChunkRounds;

    std::vector<ChunkState> states(chunks, ChunkState(n));

    auto run_chunk = [&](std::uint64_t c) {
        ChunkState& st = states[c];
        std::vector<ValidatorAction> actions(n);
        const std::uint64_t lo = c * kChunkRounds;
        const std::uint64_t hi = std::min(rounds, lo + kChunkRounds);
        for (std::uint64_t r = lo; r < hi; ++r) {
            const std::uint64_t base = r * draws_per_round;
            const bool attack = u01(seed, base) < s.beta;
            const AggregatorAction a =
                attack ? AggregatorAction::attack : AggregatorAction::honest;
            bool challenged = false;
            for (std::size_t i = 0; i < n; ++i) {
                const double u = u01(seed, base + 1 + i);
                const auto& mix = s.validators[i];
                if (u < mix.alpha) {
                    actions[i] = ValidatorAction::verify;
                    challenged = true;
                } else if (u < mix.alpha + mix.gamma) {
                    actions[i] = ValidatorAction::blind_challenge;
                    challenged = true;
                } else {
                    actions[i] = ValidatorAction::free_ride;
                }
            }

            PayoffRow row;
            if (s.variant == Variant::non_kyc) {
                row = payoff_nonkyc(p, s.non_kyc->V_max, s.non_kyc->deposits, a,
                                    actions);
            } else if (s.variant == Variant::tie_break) {
                const auto cell =
                    payoff_tiebreak(p, TieBreakParams{s.tie_break->D},
                                    s.validators[0].alpha, s.beta, a, actions[0]);
                row.aggregator = cell.first;
                row.validators = {cell.second};
            } else if (n == 1) {
                const auto cell = payoff_single(p, a, actions[0]);
                row.aggregator = cell.first;
                row.validators = {cell.second};
            } else {
                row = payoff_multi(p, a, actions);
            }

            st.agg.add(row.aggregator);
            for (std::size_t i = 0; i < n; ++i) {
                st.validator[i].add(row.validators[i]);
                st.by_action[i][static_cast<std::size_t>(actions[i])].add(
                    row.validators[i]);
            }
            if (attack) {
                ++st.attacks;
                if (challenged) ++st.detected;
            }
            st.loss.add(attack && !challenged ? p.Z : 0.0);
        }
    };

    if (threads == 1 || chunks == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(threads), chunks);
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t c = next.fetch_add(1);
                    if (c >= chunks) return;
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Deterministic merge order: chunk 0, 1, 2, ...
    ChunkState total(n);
    for (const auto& st : states) total.merge(st);

    SimulationReport rep;
    rep.rounds = rounds;
    rep.seed = seed;
    rep.mean_utility_aggregator = total.agg.mean;
    rep.se_aggregator = total.agg.se();
    rep.mean_utility_validators.resize(n);
    static const char* kActionNames[3] = {"verify", "free_ride", "blind_challenge"};
    for (std::size_t i = 0; i < n; ++i) {
        auto& vs = rep.mean_utility_validators[i];
        vs.mean = total.validator[i].mean;
        vs.se = total.validator[i].se();
        for (std::size_t a = 0; a < 3; ++a) {
            const Moments& mom = total.by_action[i][a];
            if (mom.count > 0) {
                vs.by_action[kActionNames[a]] = ActionStats{mom.count, mom.mean, mom.se()};
            }
        }
    }
    rep.empirical_loss_per_round = total.loss.mean;
    rep.se_loss = total.loss.se();
    rep.attack_rate =
        static_cast<double>(total.attacks) / static_cast<double>(rounds);
    rep.detection_rate =
        total.attacks == 0 ? 0.0
                           : static_cast<double>(total.detected) /
                                 static_cast<double>(total.attacks);
    return rep;
}

ComparisonReport compare_to_theory(const SimulationReport& rep, const GameParams& p,
                                   const StrategyProfile& s, double z_threshold) {
    validate_params(p);
    validate_profile(p, s);
    ComparisonReport out;

    const auto push = [&](const std::string& name, double emp, double th, double se) {
        StatCheck c;
        c.name = name;
        c.empirical = emp;
        c.theoretical = th;
        c.se = se;
        if (se > 0.0) {
            c.z = (emp - th) / se;
        } else {
            c.z = std::abs(emp - th) <= 1e-12
                      ? 0.0
                      : std::numeric_limits<double>::infinity();
        }
        c.ok = std::abs(c.z) <= z_threshold;
        out.stats.push_back(c);
    };

    const double eu_hon = expected_utility_aggregator(p, s, AggregatorAction::honest);
    const double eu_att = expected_utility_aggregator(p, s, AggregatorAction::attack);
    push("aggregator_mean", rep.mean_utility_aggregator,
         (1.0 - s.beta) * eu_hon + s.beta * eu_att, rep.se_aggregator);

    const bool blind_admissible = p.n == 1 && s.variant == Variant::kyc;
    for (std::size_t i = 0; i < s.validators.size(); ++i) {
        const auto& mix = s.validators[i];
        const double eu_v =
            expected_utility_validator(p, s, i, ValidatorAction::verify);
        const double eu_f =
            expected_utility_validator(p, s, i, ValidatorAction::free_ride);
        const double eu_b =
            blind_admissible
                ? expected_utility_validator(p, s, i, ValidatorAction::blind_challenge)
                : 0.0;
        const double theory = mix.alpha * eu_v + mix.gamma * eu_b +
                              (1.0 - mix.alpha - mix.gamma) * eu_f;
        const std::string base = "validator[" + std::to_string(i) + "]";
        const ValidatorStats& vs = rep.mean_utility_validators.at(i);
        push(base + "_mean", vs.mean, theory, vs.se);

        const auto cond = [&](const char* action, double prob, double eu) {
            if (prob <= 0.0) return;
            const auto it = vs.by_action.find(action);
            if (it == vs.by_action.end() || it->second.rounds < 2) return;
            push(base + "_" + action + "_mean", it->second.mean, eu, it->second.se);
        };
        cond("verify", mix.alpha, eu_v);
        cond("free_ride", 1.0 - mix.alpha - mix.gamma, eu_f);
        if (blind_admissible) cond("blind_challenge", mix.gamma, eu_b);
    }

    const double rounds_d = static_cast<double>(rep.rounds);
    push("attack_rate", rep.attack_rate, s.beta,
         std::sqrt(rep.attack_rate * (1.0 - rep.attack_rate) / rounds_d));

    const double attacks = rep.attack_rate * rounds_d;
    if (attacks >= 1.0) {
        double undetected = 1.0;
        for (const auto& v : s.validators) undetected *= 1.0 - v.alpha - v.gamma;
        push("detection_rate", rep.detection_rate, 1.0 - undetected,
             std::sqrt(rep.detection_rate * (1.0 - rep.detection_rate) / attacks));
    } else {
        out.warnings.push_back("NoAttacks: no attack rounds sampled; "
                               "detection_rate not compared");
    }

    push("loss_mean", rep.empirical_loss_per_round, system_loss(p, s), rep.se_loss);

    if (rep.rounds < 10000) {
        out.warnings.push_back(
            "MinimumRounds: fewer than 10000 rounds; z-tests unreliable");
    }

    out.pass = true;
    for (const auto& c : out.stats) out.pass = out.pass && c.ok;
    return out;
}

}  // namespace rollupgames
