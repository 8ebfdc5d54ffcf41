#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rollupgames/closed_form.hpp"
#include "rollupgames/extensions.hpp"
#include "rollupgames/io.hpp"
#include "rollupgames/simulate.hpp"

using namespace rollupgames;

namespace {

StrategyProfile verifier_equilibrium() {
    StrategyProfile s;
    s.beta = 0.2;
    s.validators = {{0.6, 0.0}};
    return s;
}

std::string report_bytes(const SimulationReport& rep) { return to_json(rep).dump(); }

}  // namespace

TEST_CASE("identical seeds give byte-identical reports") {
    const GameParams p;
    const auto s = verifier_equilibrium();

    const auto a = simulate(p, s, 100000, 42);
    const auto b = simulate(p, s, 100000, 42);
    CHECK(report_bytes(a) == report_bytes(b));

    const auto c = simulate(p, s, 100000, 43);
    CHECK(report_bytes(a) != report_bytes(c));
}

TEST_CASE("thread count does not change the report") {
    const GameParams p;
    const auto s = verifier_equilibrium();

    // 65537 rounds forces an uneven tail chunk.
    const auto one = simulate(p, s, 65537, 9, 1);
    const auto three = simulate(p, s, 65537, 9, 3);
    const auto eight = simulate(p, s, 65537, 9, 8);
    CHECK(report_bytes(one) == report_bytes(three));
    CHECK(report_bytes(one) == report_bytes(eight));
}

TEST_CASE("simulation agrees with the oracle at the verifier equilibrium") {
    const GameParams p;
    const auto s = verifier_equilibrium();
    const auto rep = simulate(p, s, 200000, 7, 4);
    const auto cmp = compare_to_theory(rep, p, s);

    CHECK(cmp.pass);
    CHECK(cmp.warnings.empty());
    for (const auto& st : cmp.stats) CHECK(std::abs(st.z) <= 3.0);

    // Free-riding pays T in every round of the single-validator game, so the
    // conditional mean is exact.
    const auto& fr = rep.mean_utility_validators[0].by_action.at("free_ride");
    CHECK(fr.mean == 10.0);
    CHECK(fr.se == 0.0);
    CHECK(fr.rounds > 0);

    const auto& ver = rep.mean_utility_validators[0].by_action.at("verify");
    CHECK(ver.rounds + fr.rounds == rep.rounds);
    CHECK(rep.mean_utility_validators[0].by_action.count("blind_challenge") == 0);
}

TEST_CASE("chance-taker equilibrium simulates with blind challenges") {
    GameParams p;
    p.C = 12.0;
    StrategyProfile s;
    s.beta = 3.0 / 11.0;
    s.validators = {{0.0, 180.0 / 305.0}};

    const auto rep = simulate(p, s, 200000, 11, 2);
    const auto cmp = compare_to_theory(rep, p, s);
    CHECK(cmp.pass);
    CHECK(rep.mean_utility_validators[0].by_action.count("blind_challenge") == 1);
    CHECK(rep.mean_utility_validators[0].by_action.count("verify") == 0);
    CHECK(rep.detection_rate == doctest::Approx(180.0 / 305.0).epsilon(0.02));
}

TEST_CASE("off-equilibrium profiles still match their own oracle values") {
    GameParams p;
    p.n = 2;
    StrategyProfile s;
    s.beta = 0.2;
    s.validators = {{0.3, 0.0}, {0.5, 0.0}};

    const auto rep = simulate(p, s, 150000, 3, 2);
    const auto cmp = compare_to_theory(rep, p, s);
    CHECK(cmp.pass);
}

TEST_CASE("a mismatched profile fails the comparison") {
    const GameParams p;
    const auto rep = simulate(p, verifier_equilibrium(), 200000, 7);

    StrategyProfile wrong = verifier_equilibrium();
    wrong.beta = 0.35;
    const auto cmp = compare_to_theory(rep, p, wrong);
    CHECK_FALSE(cmp.pass);

    bool attack_rate_flagged = false;
    for (const auto& st : cmp.stats) {
        if (st.name == "attack_rate") attack_rate_flagged = !st.ok;
    }
    CHECK(attack_rate_flagged);
}

TEST_CASE("variant profiles simulate through their own payoff tables") {
    SUBCASE("non-KYC") {
        GameParams p;
        p.n = 2;
        const auto e = nonkyc_two_validator_equilibrium(p, {0.0, 100.0, 50.0});
        const auto rep = simulate(p, e.profile, 100000, 21, 2);
        const auto cmp = compare_to_theory(rep, p, e.profile);
        CHECK(cmp.pass);
    }

    SUBCASE("tie-break") {
        const GameParams p;
        const auto e = tiebreak_equilibrium(p, {-50.0});
        const auto rep = simulate(p, e.profile, 100000, 22, 2);
        const auto cmp = compare_to_theory(rep, p, e.profile);
        CHECK(cmp.pass);
    }
}

TEST_CASE("degenerate inputs and warnings") {
    const GameParams p;
    const auto s = verifier_equilibrium();

    CHECK_THROWS_AS(simulate(p, s, 0, 1), ConfigError);

    SUBCASE("few rounds trip the minimum-rounds warning") {
        const auto rep = simulate(p, s, 5000, 1);
        const auto cmp = compare_to_theory(rep, p, s);
        REQUIRE(cmp.warnings.size() >= 1);
        CHECK(cmp.warnings.back().find("MinimumRounds") == 0);
    }

    SUBCASE("no attacks means no detection-rate comparison") {
        StrategyProfile honest = s;
        honest.beta = 0.0;
        const auto rep = simulate(p, honest, 20000, 1);
        CHECK(rep.attack_rate == 0.0);
        CHECK(rep.detection_rate == 0.0);
        const auto cmp = compare_to_theory(rep, p, honest);
        CHECK(cmp.pass);
        REQUIRE(cmp.warnings.size() == 1);
        CHECK(cmp.warnings[0].find("NoAttacks") == 0);
        for (const auto& st : cmp.stats) CHECK(st.name != "detection_rate");
    }
}

TEST_CASE("empirical moments line up across merge boundaries") {
    // One chunk vs many chunks of the same stream: Welford within a chunk and
    // the pairwise merge across chunks must agree with a direct pass.
    const GameParams p;
    const auto s = verifier_equilibrium();
    const auto rep = simulate(p, s, 200000, 5, 6);

    CHECK(rep.attack_rate == doctest::Approx(0.2).epsilon(0.02));
    CHECK(rep.empirical_loss_per_round ==
          doctest::Approx(16.0).epsilon(0.05));
    CHECK(rep.mean_utility_aggregator == doctest::Approx(20.0).epsilon(0.03));
    CHECK(rep.se_aggregator > 0.0);
    CHECK(rep.se_loss > 0.0);
}
