#include "rollupgames/closed_form.hpp"

#include <cmath>
#include <limits>

#include "rollupgames/oracle.hpp"

namespace rollupgames {

double damage_ratio(const GameParams& p) {
    if (!(p.Z + p.S > 0.0)) throw DegenerateA("Z + S must be positive");
    const double a = (p.B + p.S) / (p.Z + p.S);
    if (!(a > 0.0 && a < 1.0)) {
        throw DegenerateA("A = (B+S)/(Z+S) must lie in (0,1)");
    }
    return a;
}

double challenge_reward_ratio(const GameParams& p) {
    return (p.T / static_cast<double>(p.n) + p.f_p * p.V) / (p.delta * p.S);
}

double alpha_sym(double A, int m) {
    if (m < 1) throw BadGroupSizes("alpha_m needs m >= 1");
    return -std::expm1(std::log(A) / static_cast<double>(m));
}

double P_coeff(double A, int m) {
    if (m < 1) throw BadGroupSizes("P_m needs m >= 1");
    if (m == 1) return 1.0;
    return (1.0 - A) / (static_cast<double>(m) * alpha_sym(A, m));
}

double Q_coeff(double A, int m) {
    if (m < 1) throw BadGroupSizes("Q_m needs m >= 1");
    if (m == 1) return 1.0;
    return A / (1.0 - alpha_sym(A, m));
}

double Delta_coeff(double A, int m) {
    const double dq = Q_coeff(A, m) - Q_coeff(A, m + 1);
    if (dq == 0.0) throw SingularDenominator("Q_m - Q_{m+1} vanished");
    return (P_coeff(A, m) - P_coeff(A, m + 1)) / dq;
}

double Gamma_coeff(double A, int m) {
    if (m < 0) throw BadGroupSizes("Gamma_m needs m >= 0");
    if (m == 0) return 0.0;
    const double am = alpha_sym(A, m);
    const double md = static_cast<double>(m);
    const double lead = (1.0 / A - 1.0) / (md * (md + 1.0)) - am / (md + 1.0);
    return lead * (1.0 - am) / (am * am);
}

double beta_sym(const GameParams& p, int m) {
    const double A = damage_ratio(p);
    const double share = p.T / static_cast<double>(p.n);
    const double den = P_coeff(A, m) * p.delta * p.S -
                       Q_coeff(A, m) * (p.f_p * p.V + share) + p.f_p * p.V;
    if (!(den > 0.0)) {
        throw NegativeDenominator("mixer indifference denominator is not positive");
    }
    return p.C / den;
}

double critical_verification_cost(const GameParams& p) {
    return (p.delta * p.S - p.T) * (p.T + p.f_n * p.V) / (p.delta * p.S + p.f_n * p.V);
}

DerivedQuantities derived_quantities(const GameParams& p, int m) {
    validate_params(p);
    if (m < 1 || m > p.n) throw BadGroupSizes("need 1 <= m <= n");
    const double A = damage_ratio(p);
    DerivedQuantities dq;
    dq.A = A;
    dq.R = challenge_reward_ratio(p);
    dq.P_m = P_coeff(A, m);
    dq.Q_m = Q_coeff(A, m);
    dq.Delta_m = Delta_coeff(A, m);
    dq.Gamma_m = Gamma_coeff(A, m);
    dq.alpha_m = alpha_sym(A, m);
    dq.m = m;
    dq.n = p.n;
    return dq;
}

const char* to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::single_chance_taker: return "single_chance_taker";
        case EquilibriumKind::single_verifier: return "single_verifier";
        case EquilibriumKind::single_triple_point: return "single_triple_point";
        case EquilibriumKind::two_sym: return "two_sym";
        case EquilibriumKind::two_one_freerider: return "two_one_freerider";
        case EquilibriumKind::sym_mNE: return "sym_mNE";
        case EquilibriumKind::asym: return "asym";
        case EquilibriumKind::nonkyc: return "nonkyc";
        default: return "tie_break";
    }
}

namespace {

FeasibilityEntry entry(const char* cond, double slack) {
    return FeasibilityEntry{cond, slack >= 0.0, slack};
}

EquilibriumResult make_result(const GameParams& p, EquilibriumKind kind,
                              StrategyProfile profile, int m,
                              std::vector<FeasibilityEntry> feas) {
    EquilibriumResult r;
    r.kind = kind;
    r.m = m;
    r.feasibility = std::move(feas);
    r.loss = system_loss(p, profile);
    r.profile = std::move(profile);
    return r;
}

}  // namespace

std::vector<EquilibriumResult> single_validator_equilibria(const GameParams& p) {
    validate_params(p);
    if (p.n != 1) throw BadGroupSizes("single-validator analysis needs n = 1");
    const double dS = p.delta * p.S;
    const double fnV = p.f_n * p.V;
    const double c_star = critical_verification_cost(p);
    const double tol = 1e-9 * std::max(1.0, c_star);

    const double alpha_ver = (p.Z - p.B) / (p.Z + p.S);
    const double beta_ver = p.C / (dS - p.T);
    const double gamma_ct = (p.Z - p.B) / (p.Z + p.S + p.lambda * fnV);
    const double beta_ct = (p.T + fnV) / (dS + fnV);

    std::vector<EquilibriumResult> out;
    const bool at_threshold = std::abs(p.C - c_star) <= tol;

    if (p.C < c_star || at_threshold) {
        StrategyProfile s;
        s.beta = beta_ver;
        s.validators = {{alpha_ver, 0.0}};
        out.push_back(make_result(p, EquilibriumKind::single_verifier, std::move(s), 1,
                                  {entry("beta_positive", beta_ver),
                                   entry("beta_le_1", 1.0 - beta_ver)}));
    }
    if (p.C > c_star || at_threshold) {
        StrategyProfile s;
        s.beta = beta_ct;
        s.validators = {{0.0, gamma_ct}};
        out.push_back(make_result(p, EquilibriumKind::single_chance_taker, std::move(s),
                                  1,
                                  {entry("beta_positive", beta_ct),
                                   entry("beta_le_1", 1.0 - beta_ct)}));
    }
    if (at_threshold) {
        // At C = C* every (alpha, gamma) >= 0 on the segment
        // alpha (Z+S) + gamma (Z+S+lambda f_n V) = Z-B is an equilibrium;
        // report its midpoint.
        StrategyProfile s;
        s.beta = beta_ct;
        s.validators = {{alpha_ver / 2.0, gamma_ct / 2.0}};
        out.push_back(make_result(p, EquilibriumKind::single_triple_point, std::move(s),
                                  1,
                                  {entry("beta_positive", beta_ct),
                                   entry("beta_le_1", 1.0 - beta_ct)}));
    }
    return out;
}

std::vector<EquilibriumResult> two_validator_equilibria(const GameParams& p) {
    validate_params(p);
    if (p.n != 2) throw BadGroupSizes("two-validator analysis needs n = 2");
    const double A = damage_ratio(p);
    const double dS = p.delta * p.S;
    const double half_share = p.T / 2.0;
    const double R = challenge_reward_ratio(p);

    std::vector<EquilibriumResult> out;
    {
        const double alpha = alpha_sym(A, 2);
        const double den = dS * (1.0 - alpha / 2.0) +
                           alpha * (half_share + p.f_p * p.V) - half_share;
        if (!(den > 0.0)) {
            throw NegativeDenominator("two-validator indifference denominator");
        }
        const double beta = p.C / den;
        StrategyProfile s;
        s.beta = beta;
        s.validators = {{alpha, 0.0}, {alpha, 0.0}};
        out.push_back(make_result(p, EquilibriumKind::two_sym, std::move(s), 2,
                                  {entry("beta_positive", beta),
                                   entry("beta_le_1", 1.0 - beta)}));
    }
    if (R <= 0.5) {
        // One validator free-rides outright; the other mixes alone.
        const double alpha = 1.0 - A;
        const double beta = p.C / (dS - half_share);
        StrategyProfile s;
        s.beta = beta;
        s.validators = {{alpha, 0.0}, {0.0, 0.0}};
        out.push_back(make_result(p, EquilibriumKind::two_one_freerider, std::move(s),
                                  1,
                                  {entry("R_le_Gamma_m", 0.5 - R),
                                   entry("beta_positive", beta),
                                   entry("beta_le_1", 1.0 - beta)}));
    }
    return out;
}

MneResult symmetric_mne(const GameParams& p, int m) {
    validate_params(p);
    if (m < 1 || m > p.n) throw BadGroupSizes("need 1 <= m <= n");
    const double A = damage_ratio(p);
    const double R = challenge_reward_ratio(p);
    const double share = p.T / static_cast<double>(p.n);

    if (m < p.n) {
        const double gamma_m = Gamma_coeff(A, m);
        if (R > gamma_m) {
            return Infeasible{"R_le_Gamma_m", gamma_m - R,
                              std::numeric_limits<double>::quiet_NaN()};
        }
    }
    const double den = P_coeff(A, m) * p.delta * p.S -
                       Q_coeff(A, m) * (p.f_p * p.V + share) + p.f_p * p.V;
    if (!(den > 0.0)) {
        return Infeasible{"beta_positive", den,
                          std::numeric_limits<double>::quiet_NaN()};
    }
    const double beta = p.C / den;
    if (beta > 1.0) {
        return Infeasible{"beta_le_1", 1.0 - beta, beta};
    }
    const double alpha = alpha_sym(A, m);
    StrategyProfile s;
    s.beta = beta;
    s.validators.resize(static_cast<std::size_t>(p.n));
    for (int i = 0; i < m; ++i) s.validators[static_cast<std::size_t>(i)].alpha = alpha;
    std::vector<FeasibilityEntry> feas;
    if (m < p.n) feas.push_back(entry("R_le_Gamma_m", Gamma_coeff(A, m) - R));
    feas.push_back(entry("beta_positive", beta));
    feas.push_back(entry("beta_le_1", 1.0 - beta));
    return make_result(p, EquilibriumKind::sym_mNE, std::move(s), m, std::move(feas));
}

std::vector<MneRow> enumerate_symmetric_rows(const GameParams& p) {
    validate_params(p);
    std::vector<MneRow> rows;
    rows.reserve(static_cast<std::size_t>(p.n));
    for (int m = 1; m <= p.n; ++m) {
        rows.push_back(MneRow{m, derived_quantities(p, m), symmetric_mne(p, m)});
    }
    return rows;
}

std::vector<EquilibriumResult> enumerate_symmetric_equilibria(const GameParams& p) {
    std::vector<EquilibriumResult> out;
    for (auto& row : enumerate_symmetric_rows(p)) {
        if (auto* r = std::get_if<EquilibriumResult>(&row.result)) {
            out.push_back(std::move(*r));
        }
    }
    return out;
}

}  // namespace rollupgames
