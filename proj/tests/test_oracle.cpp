#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "rollupgames/oracle.hpp"

using namespace rollupgames;
using A = AggregatorAction;
using W = ValidatorAction;

namespace {

StrategyProfile kyc_profile(double beta, std::vector<ValidatorMix> mixes) {
    StrategyProfile s;
    s.beta = beta;
    s.validators = std::move(mixes);
    return s;
}

}  // namespace

TEST_CASE("single-validator expected utilities at the verifier equilibrium") {
    const GameParams p;
    const auto s = kyc_profile(0.2, {{0.6, 0.0}});

    CHECK(expected_utility_aggregator(p, s, A::honest) == doctest::Approx(20.0));
    CHECK(expected_utility_aggregator(p, s, A::attack) == doctest::Approx(20.0));
    CHECK(expected_utility_validator(p, s, 0, W::verify) == doctest::Approx(10.0));
    CHECK(expected_utility_validator(p, s, 0, W::free_ride) == doctest::Approx(10.0));
    CHECK(expected_utility_validator(p, s, 0, W::blind_challenge) == doctest::Approx(6.0));
    CHECK(system_loss(p, s) == doctest::Approx(16.0));
}

TEST_CASE("blind-challenge mixing makes the aggregator indifferent") {
    GameParams p;
    p.C = 12.0;
    StrategyProfile s = kyc_profile(3.0 / 11.0, {{0.0, 180.0 / 305.0}});

    const double hon = expected_utility_aggregator(p, s, A::honest);
    const double att = expected_utility_aggregator(p, s, A::attack);
    CHECK(hon == doctest::Approx(7000.0 / 305.0).epsilon(1e-12));
    CHECK(att == doctest::Approx(hon).epsilon(1e-12));

    // At beta = (T + f_n V)/(dS + f_n V) the validator is indifferent between
    // free-riding and blind-challenging, and verifying is strictly worse.
    const double eu_f = expected_utility_validator(p, s, 0, W::free_ride);
    const double eu_b = expected_utility_validator(p, s, 0, W::blind_challenge);
    const double eu_v = expected_utility_validator(p, s, 0, W::verify);
    CHECK(eu_f == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(eu_b == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(eu_v == doctest::Approx(230.0 / 11.0 - 12.0).epsilon(1e-12));
    CHECK(eu_v < eu_f);

    const auto reports = best_response_check(p, s);
    CHECK(is_epsilon_equilibrium(reports, kDefaultEps));
}

TEST_CASE("two-validator expected utilities, hand computed") {
    GameParams p;
    p.n = 2;
    const auto s = kyc_profile(0.2, {{0.3, 0.0}, {0.5, 0.0}});

    CHECK(expected_utility_aggregator(p, s, A::honest) == doctest::Approx(20.0));
    CHECK(expected_utility_aggregator(p, s, A::attack) == doctest::Approx(5.0));
    CHECK(expected_utility_validator(p, s, 0, W::verify) == doctest::Approx(3.5));
    CHECK(expected_utility_validator(p, s, 0, W::free_ride) == doctest::Approx(4.0));
    CHECK(expected_utility_validator(p, s, 1, W::verify) == doctest::Approx(4.5));
    CHECK(expected_utility_validator(p, s, 1, W::free_ride) == doctest::Approx(4.4));
    CHECK(system_loss(p, s) == doctest::Approx(14.0));

    CHECK_THROWS_AS(expected_utility_validator(p, s, 0, W::blind_challenge),
                    BlindChallengeUnsupported);
    CHECK_THROWS_AS(expected_utility_validator(p, s, 2, W::verify), BadGroupSizes);
}

TEST_CASE("binomial-sum and enumeration backends agree") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int n = 2; n <= 12; ++n) {
        GameParams p;
        p.n = n;
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<ValidatorMix> mixes;
            for (int i = 0; i < n; ++i) mixes.push_back({unit(rng), 0.0});
            const auto s = kyc_profile(unit(rng), std::move(mixes));
            for (auto act : {W::verify, W::free_ride}) {
                const double a = expected_utility_validator(p, s, 0, act,
                                                            Backend::binomial_sum);
                const double b = expected_utility_validator(p, s, 0, act,
                                                            Backend::enumeration);
                CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST_CASE("enumeration backend is capped") {
    GameParams p;
    p.n = 26;
    std::vector<ValidatorMix> mixes(26, ValidatorMix{0.1, 0.0});
    const auto s = kyc_profile(0.1, std::move(mixes));
    CHECK_THROWS_AS(expected_utility_validator(p, s, 0, W::verify, Backend::enumeration),
                    ModelError);
    CHECK_NOTHROW(expected_utility_validator(p, s, 0, W::verify, Backend::binomial_sum));
}

TEST_CASE("best response check flags profitable deviations") {
    const GameParams p;

    SUBCASE("equilibrium profile passes") {
        const auto s = kyc_profile(0.2, {{0.6, 0.0}});
        const auto reports = best_response_check(p, s);
        REQUIRE(reports.size() == 2);
        CHECK(is_epsilon_equilibrium(reports, kDefaultEps));
        for (const auto& r : reports) {
            CHECK(r.support_spread <= kDefaultEps);
            CHECK(r.best_deviation_gain <= kDefaultEps);
        }
    }

    SUBCASE("pure attack against a pure free-rider begs for verification") {
        const auto s = kyc_profile(1.0, {{0.0, 0.0}});
        const auto reports = best_response_check(p, s);
        CHECK_FALSE(is_epsilon_equilibrium(reports, kDefaultEps));
        // Blind-challenging out of support would earn dS = 50 against 10.
        CHECK(reports[1].best_deviation_gain == doctest::Approx(40.0));
        CHECK(reports[1].support_spread == 0.0);
    }

    SUBCASE("perturbing beta breaks validator indifference") {
        const auto s = kyc_profile(0.25, {{0.6, 0.0}});
        const auto reports = best_response_check(p, s);
        CHECK(reports[1].support_spread > 1e-3);
        CHECK_FALSE(is_epsilon_equilibrium(reports, kDefaultEps));
    }

    SUBCASE("profile shape is validated first") {
        const auto s = kyc_profile(0.2, {{0.6, 0.0}, {0.1, 0.0}});
        CHECK_THROWS_AS(best_response_check(p, s), ConfigError);
    }
}

TEST_CASE("variant payloads are required by the oracle") {
    GameParams p;
    StrategyProfile s = kyc_profile(0.2, {{0.5, 0.0}});
    s.variant = Variant::non_kyc;
    CHECK_THROWS_AS(expected_utility_validator(p, s, 0, W::verify), ConfigError);
    s.variant = Variant::tie_break;
    CHECK_THROWS_AS(expected_utility_validator(p, s, 0, W::verify), ConfigError);
}

TEST_CASE("system loss scales with undetected attack probability") {
    GameParams p;
    p.n = 3;
    const auto s = kyc_profile(0.171428571428571, {{0.6, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
    CHECK(system_loss(p, s) == doctest::Approx(0.171428571428571 * 0.4 * 200.0));

    // A blind challenge also counts as detection.
    GameParams p1;
    const auto s1 = kyc_profile(0.5, {{0.3, 0.2}});
    CHECK(system_loss(p1, s1) == doctest::Approx(0.5 * 0.5 * 200.0));
}
