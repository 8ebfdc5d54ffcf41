#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rollupgames/extensions.hpp"
#include "rollupgames/oracle.hpp"

using namespace rollupgames;

TEST_CASE("non-KYC parameter ordering") {
    CHECK_NOTHROW(validate_nonkyc({0.0, 100.0, 50.0}));
    CHECK_THROWS_AS(validate_nonkyc({0.0, 0.0, 0.0}), AssumptionViolated);
    CHECK_THROWS_AS(validate_nonkyc({0.0, 100.0, 120.0}), AssumptionViolated);
    CHECK_THROWS_AS(validate_nonkyc({60.0, 100.0, 50.0}), AssumptionViolated);

    try {
        validate_nonkyc({60.0, 100.0, 50.0});
    } catch (const AssumptionViolated& e) {
        CHECK(e.reason == "V_order");
    }
}

TEST_CASE("chosen deposits attack less than mandated ones") {
    GameParams p;
    p.n = 2;
    const NonKycParams nk{0.0, 100.0, 50.0};

    const auto e = nonkyc_two_validator_equilibrium(p, nk);
    CHECK(e.kind == EquilibriumKind::nonkyc);
    CHECK(e.m == 2);
    CHECK(e.profile.beta == doctest::Approx(0.16745916135821).epsilon(1e-9));
    CHECK(e.profile.validators[0].alpha ==
          doctest::Approx(0.3675444679663241).epsilon(1e-12));
    CHECK(e.loss == doctest::Approx(e.profile.beta * 0.4 * 200.0).epsilon(1e-12));
    REQUIRE(e.profile.non_kyc.has_value());
    CHECK(e.profile.non_kyc->V_max == 100.0);
    CHECK(e.profile.non_kyc->deposits == std::vector<double>{50.0, 50.0});

    // The free-rider keeps deposit V_star, so the matched fixed-deposit game
    // has V = V_star.
    GameParams kyc = p;
    kyc.V = nk.V_star;
    const double beta_kyc = beta_sym(kyc, 2);
    CHECK(beta_kyc == doctest::Approx(0.2025991804394554).epsilon(1e-12));
    CHECK(e.profile.beta < beta_kyc);

    const auto reports = best_response_check(p, e.profile);
    CHECK(is_epsilon_equilibrium(reports, kDefaultEps));
}

TEST_CASE("non-KYC collapses to fixed deposits when the menu pins the stake") {
    GameParams p;
    p.n = 2;
    p.V = 50.0;
    const auto e = nonkyc_two_validator_equilibrium(p, {0.0, 50.0, 50.0});
    CHECK(e.profile.beta == doctest::Approx(beta_sym(p, 2)).epsilon(1e-12));
}

TEST_CASE("non-KYC dominance holds across sampled parameter points") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    while (checked < 300) {
        GameParams p;
        p.n = 2;
        p.Z = 50.0 + 400.0 * unit(rng);
        p.S = 20.0 + 200.0 * unit(rng);
        p.B = p.Z * 0.8 * unit(rng);
        p.delta = 0.2 + 0.75 * unit(rng);
        p.T = p.delta * p.S * 0.8 * unit(rng);
        p.C = 0.1 + 20.0 * unit(rng);
        p.f_p = unit(rng);
        const double v_star = 10.0 + 100.0 * unit(rng);
        const double v_max = v_star * (1.0 + 3.0 * unit(rng));
        p.V = v_star;
        try {
            validate_params(p);
            const double beta_kyc = beta_sym(p, 2);
            if (beta_kyc > 1.0) continue;
            const auto e = nonkyc_two_validator_equilibrium(p, {0.0, v_max, v_star});
            CHECK(e.profile.beta < beta_kyc);
            ++checked;
        } catch (const ModelError&) {
            continue;  // off the admissible set, resample
        }
    }
}

TEST_CASE("non-KYC rejects the wrong game size and an unreachable indifference") {
    GameParams p;
    CHECK_THROWS_AS(nonkyc_two_validator_equilibrium(p, {0.0, 100.0, 50.0}),
                    BadGroupSizes);
    GameParams p2;
    p2.n = 2;
    p2.C = 2.0;  // W = 10 > C + T/2 = 7: no nonnegative beta solves it
    CHECK_THROWS_AS(nonkyc_two_validator_equilibrium(p2, {0.0, 100.0, 0.0}),
                    NegativeBeta);
}

TEST_CASE("tie-break payoff cells") {
    const GameParams p;
    const TieBreakParams tb{-50.0};
    using A = AggregatorAction;
    using W = ValidatorAction;

    CHECK(payoff_tiebreak(p, tb, 0.6, 0.2, A::honest, W::free_ride) ==
          std::pair{20.0, 10.0});
    CHECK(payoff_tiebreak(p, tb, 0.6, 0.2, A::honest, W::verify) ==
          std::pair{20.0, 2.0});
    CHECK(payoff_tiebreak(p, tb, 0.6, 0.2, A::attack, W::free_ride) ==
          std::pair{200.0, 10.0});
    // Detected attack costs -S - alpha beta D on top of the slash.
    const auto cell = payoff_tiebreak(p, tb, 0.6, 0.2, A::attack, W::verify);
    CHECK(cell.first == doctest::Approx(-100.0 + 0.6 * 0.2 * 50.0));
    CHECK(cell.second == doctest::Approx(42.0));
    CHECK_THROWS_AS(payoff_tiebreak(p, tb, 0.6, 0.2, A::honest, W::blind_challenge),
                    BlindChallengeUnsupported);
}

TEST_CASE("tie-break defense level") {
    const GameParams p;

    SUBCASE("D = 0 recovers the baseline exactly") {
        CHECK(tiebreak_alpha(p, {0.0}, 0.2, 200.0) == 0.6);
    }

    SUBCASE("the root is continuous in D") {
        const double lo = tiebreak_alpha(p, {-1e-9}, 0.2, 200.0);
        const double hi = tiebreak_alpha(p, {1e-9}, 0.2, 200.0);
        CHECK(lo == doctest::Approx(0.6).epsilon(1e-9));
        CHECK(hi == doctest::Approx(0.6).epsilon(1e-9));
    }

    SUBCASE("negative D raises the defense level") {
        // -20 a^2 + 300 a - 180 = 0, smaller root (15 - sqrt(189))/2.
        const double a = tiebreak_alpha(p, {-50.0}, 0.2, 200.0);
        CHECK(a == doctest::Approx((15.0 - std::sqrt(189.0)) / 2.0).epsilon(1e-14));
        CHECK(a == doctest::Approx(0.6261364575663).epsilon(1e-9));
        CHECK(a > 0.6);
    }

    SUBCASE("no real root when D sinks too low") {
        CHECK_THROWS_AS(tiebreak_alpha(p, {-400.0}, 0.2, 200.0), NoAdmissibleRoot);
    }

    SUBCASE("Z must exceed B") {
        CHECK_THROWS_AS(tiebreak_alpha(p, {-50.0}, 0.2, 10.0), AssumptionViolated);
    }
}

TEST_CASE("attack payoff falls with the prize when D is negative") {
    const GameParams p;
    const TieBreakParams tb{-50.0};

    const auto d = tiebreak_dEA_dZ(p, tb, 200.0);
    CHECK(d.beta == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(d.alpha == doctest::Approx(0.6261364575663).epsilon(1e-9));
    CHECK(d.dEA_dZ == doctest::Approx(-0.0034054).epsilon(1e-4));

    // Central finite difference of E_A(Z) = B + alpha(Z)^2 beta^2 D.
    auto ea = [&](double z) {
        const double a = tiebreak_alpha(p, tb, 0.2, z);
        return p.B + a * a * 0.04 * tb.D;
    };
    const double h = 1e-4;
    const double fd = (ea(200.0 + h) - ea(200.0 - h)) / (2.0 * h);
    CHECK(d.dEA_dZ == doctest::Approx(fd).epsilon(1e-6));

    // Sign tracks D across the Z range.
    for (double D : {-100.0, -10.0, -1.0, 1.0, 10.0, 100.0}) {
        for (double Z = 21.0; Z <= 1000.0; Z += 97.0) {
            GameParams pz = p;
            pz.Z = Z;
            try {
                const auto dd = tiebreak_dEA_dZ(pz, {D}, Z);
                CHECK(dd.dEA_dZ * D > 0.0);
            } catch (const NoAdmissibleRoot&) {
            }
        }
    }
}

TEST_CASE("tie-break equilibrium package") {
    const GameParams p;
    const TieBreakParams tb{-50.0};
    const auto e = tiebreak_equilibrium(p, tb);

    CHECK(e.kind == EquilibriumKind::tie_break);
    CHECK(e.m == 1);
    CHECK(e.profile.beta == doctest::Approx(0.2).epsilon(1e-14));
    REQUIRE(e.profile.tie_break.has_value());
    CHECK(e.profile.tie_break->D == -50.0);
    CHECK(e.loss == doctest::Approx(0.2 * (1.0 - e.profile.validators[0].alpha) * 200.0)
                        .epsilon(1e-12));

    // Validator indifference holds; the aggregator side is a stationary
    // point, not a best response, so only the validator reports must pass.
    const auto reports = best_response_check(p, e.profile);
    CHECK(reports[1].support_spread <= kDefaultEps);
    CHECK(reports[1].best_deviation_gain <= kDefaultEps);

    const double alpha = e.profile.validators[0].alpha;
    const double foc = 2.0 * e.profile.beta * tb.D * alpha * alpha +
                       (p.Z + p.S) * alpha + (p.B - p.Z);
    CHECK(std::abs(foc) <= 1e-9 * p.Z);

    GameParams p2;
    p2.n = 2;
    CHECK_THROWS_AS(tiebreak_equilibrium(p2, tb), BadGroupSizes);
}
