#include "rollupgames/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "rollupgames/closed_form.hpp"

namespace rollupgames {

const char* to_string(SweepScale s) {
    return s == SweepScale::linear ? "linear" : "log";
}

const char* to_string(SweepTarget t) {
    switch (t) {
        case SweepTarget::loss_worst: return "loss_worst";
        case SweepTarget::loss_best: return "loss_best";
        case SweepTarget::beta: return "beta";
        case SweepTarget::equilibrium_count: return "equilibrium_count";
        case SweepTarget::Gamma_m: return "Gamma_m";
        default: return "Delta_m";
    }
}

SweepScale sweep_scale_from_string(const std::string& s) {
    if (s == "linear") return SweepScale::linear;
    if (s == "log") return SweepScale::log;
    throw ConfigError("unknown sweep scale \"" + s + "\"");
}

SweepTarget sweep_target_from_string(const std::string& s) {
    if (s == "loss_worst") return SweepTarget::loss_worst;
    if (s == "loss_best") return SweepTarget::loss_best;
    if (s == "beta") return SweepTarget::beta;
    if (s == "equilibrium_count") return SweepTarget::equilibrium_count;
    if (s == "Gamma_m") return SweepTarget::Gamma_m;
    if (s == "Delta_m") return SweepTarget::Delta_m;
    throw ConfigError("unknown sweep target \"" + s + "\"");
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    if (spec.steps < 1) throw ConfigError("sweep steps must be >= 1");
    if (spec.steps == 1) return {spec.from};
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(spec.steps));
    if (spec.scale == SweepScale::log) {
        if (!(spec.from > 0.0 && spec.to > 0.0)) {
            throw ConfigError("log scale needs positive endpoints");
        }
        const double lf = std::log(spec.from), lt = std::log(spec.to);
        for (int i = 0; i < spec.steps; ++i) {
            grid.push_back(std::exp(lf + (lt - lf) * i / (spec.steps - 1)));
        }
    } else {
        for (int i = 0; i < spec.steps; ++i) {
            grid.push_back(spec.from + (spec.to - spec.from) * i / (spec.steps - 1));
        }
    }
    return grid;
}

namespace {

struct Applied {
    SweepContext ctx;
    double value = 0.0;  // the value actually applied (rounded for n and m)
    int m_override = 0;
};

Applied apply_param(const SweepContext& base, const std::string& param, double v) {
    Applied a{base, v, 0};
    GameParams& p = a.ctx.params;
    if (param == "Z") p.Z = v;
    else if (param == "S") p.S = v;
    else if (param == "B") p.B = v;
    else if (param == "T") p.T = v;
    else if (param == "C") p.C = v;
    else if (param == "V") p.V = v;
    else if (param == "delta") p.delta = v;
    else if (param == "f_p") p.f_p = v;
    else if (param == "f_n") p.f_n = v;
    else if (param == "n") {
        p.n = static_cast<int>(std::lround(v));
        a.value = p.n;
    } else if (param == "D") {
        a.ctx.tie_break.D = v;
    } else if (param == "V_max") {
        a.ctx.non_kyc.V_max = v;
    } else if (param == "V_star") {
        a.ctx.non_kyc.V_star = v;
    } else if (param == "m") {
        a.m_override = static_cast<int>(std::lround(v));
        a.value = a.m_override;
    } else {
        throw ConfigError("unknown sweep param \"" + param + "\"");
    }
    return a;
}

std::vector<EquilibriumResult> kyc_equilibria(const GameParams& p) {
    if (p.n == 1) return single_validator_equilibria(p);
    if (p.n == 2) return two_validator_equilibria(p);
    return enumerate_symmetric_equilibria(p);
}

double eval_target(const Applied& a, const SweepSpec& spec) {
    const GameParams& p = a.ctx.params;
    const Variant variant = a.ctx.variant;

    if (spec.target == SweepTarget::Gamma_m || spec.target == SweepTarget::Delta_m) {
        validate_params(p);
        const double A = damage_ratio(p);
        int m = a.m_override > 0 ? a.m_override : (spec.m > 0 ? spec.m : p.n);
        if (m < 1) throw BadGroupSizes("Gamma_m / Delta_m need m >= 1");
        return spec.target == SweepTarget::Gamma_m ? Gamma_coeff(A, m)
                                                   : Delta_coeff(A, m);
    }

    if (variant == Variant::non_kyc) {
        const EquilibriumResult r =
            nonkyc_two_validator_equilibrium(p, a.ctx.non_kyc);
        switch (spec.target) {
            case SweepTarget::beta: return r.profile.beta;
            case SweepTarget::equilibrium_count:
                return r.profile.beta <= 1.0 ? 1.0 : 0.0;
            default: return r.loss;
        }
    }
    if (variant == Variant::tie_break) {
        const EquilibriumResult r = tiebreak_equilibrium(p, a.ctx.tie_break);
        switch (spec.target) {
            case SweepTarget::beta: return r.profile.beta;
            case SweepTarget::equilibrium_count: return 1.0;
            default: return r.loss;
        }
    }

    switch (spec.target) {
        case SweepTarget::beta:
            return beta_sym(p, p.n);
        case SweepTarget::equilibrium_count:
            validate_params(p);
            return static_cast<double>(kyc_equilibria(p).size());
        case SweepTarget::loss_worst:
        case SweepTarget::loss_best: {
            validate_params(p);
            bool any = false;
            double worst = 0.0, best = 0.0;
            for (const auto& r : kyc_equilibria(p)) {
                if (!any) {
                    worst = best = r.loss;
                    any = true;
                } else {
                    worst = std::max(worst, r.loss);
                    best = std::min(best, r.loss);
                }
            }
            if (!any) throw NoAdmissibleRoot("no feasible equilibrium");
            return spec.target == SweepTarget::loss_worst ? worst : best;
        }
        default:
            throw ConfigError("unhandled sweep target");
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepContext& ctx, const SweepSpec& spec) {
    // Reject unknown params before running the grid.
    apply_param(ctx, spec.param, spec.from);
    std::vector<SweepRow> rows;
    for (double v : sweep_grid(spec)) {
        const Applied a = apply_param(ctx, spec.param, v);
        SweepRow row;
        row.value = a.value;
        try {
            validate_params(a.ctx.params);
        } catch (const AssumptionViolated& e) {
            row.violates_assumptions = true;
            row.note = e.reason;
            rows.push_back(std::move(row));
            continue;
        }
        try {
            row.target_value = eval_target(a, spec);
        } catch (const ModelError& e) {
            row.note = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rollupgames
