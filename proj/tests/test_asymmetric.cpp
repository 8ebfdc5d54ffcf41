#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rollupgames/asymmetric.hpp"
#include "rollupgames/closed_form.hpp"
#include "rollupgames/oracle.hpp"

using namespace rollupgames;

namespace {

// n = 15, m = 10 figure configuration: T is chosen per target R at fixed
// delta*S = 50 and f_p*V = 31, via T = n (R delta S - f_p V).
GameParams band_params(double R) {
    GameParams p;
    p.Z = 200.0;
    p.S = 100.0;
    p.B = 20.0;
    p.C = 8.0;
    p.V = 100.0;
    p.delta = 0.5;
    p.f_p = 0.31;
    p.n = 15;
    p.T = p.n * (R * p.delta * p.S - p.f_p * p.V);
    return p;
}

}  // namespace

TEST_CASE("prize-share identities hold for random groupings") {
    std::mt19937 rng(911);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> m_pick(2, 12);

    for (int it = 0; it < 10000; ++it) {
        const int m = m_pick(rng);
        std::uniform_int_distribution<int> k_pick(1, m - 1);
        const int k = k_pick(rng);
        const double a1 = unit(rng);
        const double a2 = unit(rng);
        const auto t = combinatorial_terms(a1, a2, k, m);
        const double p1_id = a2 * t.p3 + (1.0 - a2) * t.p4;
        const double p2_id = a1 * t.p3 + (1.0 - a1) * t.p4;
        CHECK(std::abs(t.p1 - p1_id) <= 1e-12);
        CHECK(std::abs(t.p2 - p2_id) <= 1e-12);
    }
}

TEST_CASE("combinatorial terms, degenerate groupings") {
    // k = 1, m = 2: no peers in either group, every share is whole.
    const auto t = combinatorial_terms(0.3, 0.7, 1, 2);
    CHECK(t.p3 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.p4 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.p5 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.p1 == doctest::Approx(0.7 * 0.5 + 0.3).epsilon(1e-15));
    CHECK(t.p2 == doctest::Approx(0.3 * 0.5 + 0.7).epsilon(1e-15));

    CHECK_THROWS_AS(combinatorial_terms(0.3, 0.7, 2, 2), BadGroupSizes);
    CHECK_THROWS_AS(combinatorial_terms(0.3, 0.7, 0, 3), BadGroupSizes);
    CHECK_THROWS_AS(combinatorial_terms(1.3, 0.7, 1, 3), AssumptionViolated);
}

TEST_CASE("asymmetric roots at R = 0.653") {
    const GameParams p = band_params(0.653);
    const double A = damage_ratio(p);
    const double beta_s = beta_sym(p, 10);

    const double want_a1[] = {0.0839928157778, 0.0833393414033, 0.0820470588456,
                              0.0783488324553, 0.0466196218476};
    const double want_a2[] = {0.0879515675015, 0.0886077090576, 0.0899075028307,
                              0.0936437229706, 0.126735533392};
    const double want_beta[] = {0.157015365465, 0.157015114716, 0.157014408551,
                                0.157010836254, 0.156882363365};

    double prev_beta = 1.0;
    for (int k = 1; k <= 5; ++k) {
        const auto sols = solve_asymmetric(p, 10, k);
        REQUIRE(sols.size() == 1);
        const auto& s = sols[0];
        CHECK(s.k == k);
        CHECK(s.m == 10);
        CHECK(s.branch == 0);
        CHECK(s.alpha1 == doctest::Approx(want_a1[k - 1]).epsilon(1e-9));
        CHECK(s.alpha2 == doctest::Approx(want_a2[k - 1]).epsilon(1e-9));
        CHECK(s.beta == doctest::Approx(want_beta[k - 1]).epsilon(1e-9));

        // The smaller group verifies less per head in these cells.
        CHECK(s.alpha1 < s.alpha2);

        for (double r : s.residuals) CHECK(std::abs(r) <= 1e-9);

        // Raw indifference equations in money units.
        const auto raw = asym_indifference_residuals(p, 10, k, s.alpha1, s.alpha2, s.beta);
        CHECK(std::abs(raw[0]) <= 1e-6);
        CHECK(std::abs(raw[1]) <= 1e-6);

        // Aggregator pinned to the damage ratio.
        const double undetected = std::pow(1.0 - s.alpha1, k) *
                                  std::pow(1.0 - s.alpha2, 10 - k);
        CHECK(undetected == doctest::Approx(A).epsilon(1e-12));

        // Attack probability drops strictly below the symmetric one, and
        // keeps dropping as the split deepens.
        CHECK(s.beta < beta_s);
        CHECK(s.beta < prev_beta);
        prev_beta = s.beta;

        CHECK(s.loss == doctest::Approx(s.beta * A * p.Z).epsilon(1e-12));
    }
}

TEST_CASE("asymmetric roots satisfy the full oracle") {
    const GameParams p = band_params(0.653);
    for (int k : {1, 3, 5}) {
        const auto sols = solve_asymmetric(p, 10, k);
        REQUIRE(sols.size() == 1);
        const auto& sol = sols[0];
        StrategyProfile s;
        s.beta = sol.beta;
        s.validators.resize(15);
        for (int i = 0; i < k; ++i) s.validators[static_cast<std::size_t>(i)].alpha = sol.alpha1;
        for (int i = k; i < 10; ++i) s.validators[static_cast<std::size_t>(i)].alpha = sol.alpha2;
        const auto reports = best_response_check(p, s);
        // Mixing validators must be indifferent; outside free-riders must not
        // want in. 1e-9 on utilities of order 100.
        CHECK(is_epsilon_equilibrium(reports, 1e-7));
        for (std::size_t i = 11; i < reports.size(); ++i) {
            const auto& r = reports[i];
            CHECK(r.best_deviation_gain == 0.0);
            const double gain = r.action_utilities.at("verify") -
                                r.action_utilities.at("free_ride");
            CHECK(gain < 0.0);
        }
    }
}

TEST_CASE("large verify-heavy groups are not searched") {
    const GameParams p = band_params(0.653);
    CHECK(solve_asymmetric(p, 10, 6).empty());
    CHECK(solve_asymmetric(p, 11, 6).empty());
    CHECK_THROWS_AS(solve_asymmetric(p, 10, 0), BadGroupSizes);
    CHECK_THROWS_AS(solve_asymmetric(p, 16, 1), BadGroupSizes);
    CHECK_THROWS_AS(solve_asymmetric(p, 1, 1), BadGroupSizes);
}

TEST_CASE("R outside a cell's band has no root") {
    // At R = 0.66 the k = 5 band has closed (it ends near 0.656) while the
    // k = 1 band is still open (up to about 0.6735).
    const GameParams p = band_params(0.66);
    CHECK_THROWS_AS(solve_asymmetric(p, 10, 5), NoAdmissibleRoot);
    CHECK(solve_asymmetric(p, 10, 1).size() == 1);
}

TEST_CASE("R sweep collects admissible cells and skips broken ones") {
    const GameParams p = band_params(0.653);

    std::vector<std::string> notes;
    const auto rows = sweep_k(p, 10, {0.653, 0.6, 0.672}, &notes);

    // R = 0.6 rescales T negative: parameter validation rejects the point.
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].find("0.6") != std::string::npos);

    int k1_rows = 0;
    for (const auto& row : rows) {
        CHECK(row.k >= 1);
        CHECK(row.k <= 5);
        CHECK(row.residual_max <= 1e-9);
        CHECK(row.beta > 0.0);
        CHECK(row.beta <= 1.0);
        if (row.k == 1) ++k1_rows;
    }
    // Both surviving grid points keep their k = 1 cell; deeper cells thin out
    // as R grows.
    CHECK(k1_rows == 2);
    const auto r653 = std::count_if(rows.begin(), rows.end(),
                                    [](const AsymSweepRow& r) { return r.R == 0.653; });
    CHECK(r653 == 5);
}
