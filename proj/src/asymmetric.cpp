#include "rollupgames/asymmetric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "rollupgames/closed_form.hpp"
#include "rollupgames/oracle.hpp"

namespace rollupgames {

namespace {

std::vector<double> binom_pmf(int trials, double q) {
    std::vector<double> pmf(static_cast<std::size_t>(trials) + 1, 0.0);
    if (trials == 0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (q <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (q >= 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    double lchoose = 0.0;  // log C(trials, i), updated incrementally
    for (int i = 0; i <= trials; ++i) {
        pmf[static_cast<std::size_t>(i)] =
            std::exp(lchoose + i * lq + (trials - i) * l1q);
        lchoose += std::log(static_cast<double>(trials - i)) -
                   std::log(static_cast<double>(i + 1));
    }
    return pmf;
}

double cross_sum(const std::vector<double>& w1, const std::vector<double>& w2,
                 int denom_offset) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) {
        for (std::size_t j = 0; j < w2.size(); ++j) {
            acc += w1[i] * w2[j] /
                   static_cast<double>(i + j + static_cast<std::size_t>(denom_offset));
        }
    }
    return acc;
}

void check_group_sizes(const GameParams& p, int m, int k) {
    if (m < 2 || m > p.n) throw BadGroupSizes("need 2 <= m <= n");
    if (k < 1 || k > m - 1) throw BadGroupSizes("need 1 <= k <= m-1");
}

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

CombinatorialTerms combinatorial_terms(double alpha1, double alpha2, int k, int m) {
    if (m < 2 || k < 1 || k > m - 1) throw BadGroupSizes("need m >= 2, 1 <= k <= m-1");
    if (!(alpha1 >= 0.0 && alpha1 <= 1.0 && alpha2 >= 0.0 && alpha2 <= 1.0)) {
        throw AssumptionViolated("alpha_out_of_range", "alphas must lie in [0,1]");
    }
    const auto w1_peers = binom_pmf(k - 1, alpha1);
    const auto w2_peers = binom_pmf(m - k - 1, alpha2);
    CombinatorialTerms t;
    t.k = k;
    t.m = m;
    t.alpha1 = alpha1;
    t.alpha2 = alpha2;
    t.p3 = cross_sum(w1_peers, w2_peers, 2);
    t.p4 = cross_sum(w1_peers, w2_peers, 1);
    t.p5 = w1_peers[0] * w2_peers[0];
    t.p1 = cross_sum(w1_peers, binom_pmf(m - k, alpha2), 1);
    t.p2 = cross_sum(binom_pmf(k, alpha1), w2_peers, 1);
    return t;
}

std::array<double, 2> asym_indifference_residuals(const GameParams& p, int m, int k,
                                                  double alpha1, double alpha2,
                                                  double beta) {
    check_group_sizes(p, m, k);
    const CombinatorialTerms t = combinatorial_terms(alpha1, alpha2, k, m);
    const double dS = p.delta * p.S;
    const double share = p.T / static_cast<double>(p.n);
    const double fpV = p.f_p * p.V;

    const double q1 = std::pow(1.0 - alpha1, k - 1) * std::pow(1.0 - alpha2, m - k);
    const double q2 = std::pow(1.0 - alpha1, k) * std::pow(1.0 - alpha2, m - k - 1);

    const double verify1 = beta * dS * t.p1 + (1.0 - beta) * share - p.C;
    const double free1 =
        (1.0 - beta) * share + beta * (q1 * share - (1.0 - q1) * fpV);
    const double verify2 = beta * dS * t.p2 + (1.0 - beta) * share - p.C;
    const double free2 =
        (1.0 - beta) * share + beta * (q2 * share - (1.0 - q2) * fpV);
    return {verify1 - free1, verify2 - free2};
}

std::vector<AsymSolution> solve_asymmetric(const GameParams& p, int m, int k) {
    validate_params(p);
    check_group_sizes(p, m, k);
    if (2 * k > m) return {};  // group 1 is wlog the smaller, harder-verifying group

    const double A = damage_ratio(p);
    const double dS = p.delta * p.S;
    const double share = p.T / static_cast<double>(p.n);
    const double fpV = p.f_p * p.V;
    const double alpha_top = alpha_sym(A, m);

    // alpha2 implied by the aggregator indifference constraint
    // (1-a1)^k (1-a2)^(m-k) = A.
    const auto alpha2_of = [&](double a1) {
        return 1.0 - std::pow(A / std::pow(1.0 - a1, k), 1.0 / (m - k));
    };
    // Cross-group indifference residual; zero iff both mixer groups can be
    // indifferent at a common beta.
    const auto phi = [&](double a1) {
        const CombinatorialTerms t = combinatorial_terms(a1, alpha2_of(a1), k, m);
        return (t.p3 - t.p4) * dS + t.p5 * (fpV + share);
    };

    constexpr int kScan = 2048;
    std::vector<double> grid;
    grid.reserve(kScan + 2);
    grid.push_back(alpha_top * 1e-9);
    for (int i = 1; i < kScan; ++i) {
        grid.push_back(alpha_top * static_cast<double>(i) / kScan);
    }
    grid.push_back(alpha_top * (1.0 - 1e-12));

    std::vector<double> roots;
    double prev_x = grid[0];
    double prev_f = phi(prev_x);
    for (std::size_t idx = 1; idx < grid.size(); ++idx) {
        const double x = grid[idx];
        const double f = phi(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if ((prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_x, hi = x, flo = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = phi(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    if (roots.empty()) {
        throw NoAdmissibleRoot("no asymmetric root for k=" + std::to_string(k) +
                               ", m=" + std::to_string(m) + " in the alpha1 interval");
    }

    std::sort(roots.begin(), roots.end());
    std::vector<AsymSolution> out;
    for (double a1 : roots) {
        const double a2 = alpha2_of(a1);
        const CombinatorialTerms t = combinatorial_terms(a1, a2, k, m);
        const double beta_den = t.p4 * dS + fpV - t.p5 * (fpV + share);
        if (beta_den == 0.0) {
            throw SingularDenominator("beta denominator vanished at asymmetric root");
        }
        const double beta = p.C / beta_den;
        if (!(beta_den > 0.0) || !(beta > 0.0) || beta > 1.0) continue;

        AsymSolution sol;
        sol.alpha1 = a1;
        sol.alpha2 = a2;
        sol.beta = beta;
        sol.k = k;
        sol.m = m;
        sol.n = p.n;
        sol.branch = static_cast<int>(out.size());
        sol.residuals = {phi(a1), beta * beta_den - p.C,
                         std::pow(1.0 - a1, k) * std::pow(1.0 - a2, m - k) - A};

        StrategyProfile s;
        s.beta = beta;
        s.validators.resize(static_cast<std::size_t>(p.n));
        for (int i = 0; i < k; ++i) s.validators[static_cast<std::size_t>(i)].alpha = a1;
        for (int i = k; i < m; ++i) {
            s.validators[static_cast<std::size_t>(i)].alpha = a2;
        }
        sol.loss = system_loss(p, s);
        out.push_back(sol);
    }
    if (out.empty()) {
        throw NoAdmissibleRoot("asymmetric roots found but none admits beta in (0,1]");
    }
    return out;
}

std::vector<AsymSweepRow> sweep_k(const GameParams& p, int m,
                                  const std::vector<double>& R_grid,
                                  std::vector<std::string>* notes) {
    validate_params(p);
    if (m < 2 || m > p.n) throw BadGroupSizes("need 2 <= m <= n");
    const auto note = [&](const std::string& msg) {
        if (notes) notes->push_back(msg);
    };
    std::vector<AsymSweepRow> rows;
    for (double R : R_grid) {
        GameParams q = p;
        q.T = static_cast<double>(p.n) * (R * p.delta * p.S - p.f_p * p.V);
        try {
            validate_params(q);
        } catch (const ModelError& e) {
            note("R=" + fmt_g(R) + ": " + e.what());
            continue;
        }
        for (int k = 1; 2 * k <= m; ++k) {
            try {
                for (const AsymSolution& sol : solve_asymmetric(q, m, k)) {
                    AsymSweepRow row;
                    row.k = k;
                    row.R = R;
                    row.branch = sol.branch;
                    row.alpha1 = sol.alpha1;
                    row.alpha2 = sol.alpha2;
                    row.beta = sol.beta;
                    row.loss = sol.loss;
                    row.residual_max =
                        std::max({std::abs(sol.residuals[0]), std::abs(sol.residuals[1]),
                                  std::abs(sol.residuals[2])});
                    rows.push_back(row);
                }
            } catch (const NoAdmissibleRoot&) {
                // no equilibrium in this (k, R) cell
            } catch (const ModelError& e) {
                note("R=" + fmt_g(R) + " k=" + std::to_string(k) + ": " +
                     e.what());
            }
        }
    }
    return rows;
}

}  // namespace rollupgames
