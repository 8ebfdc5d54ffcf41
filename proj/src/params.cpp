#include "rollupgames/params.hpp"

#include <cmath>
#include <string>

namespace rollupgames {

namespace {

void require_nonneg(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw AssumptionViolated(std::string(name) + "_negative",
                                 std::string(name) + " must be finite and >= 0");
    }
}

void require_fraction(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw AssumptionViolated(std::string(name) + "_out_of_range",
                                 std::string(name) + " must lie in [0,1]");
    }
}

}  // namespace

void validate_params(const GameParams& p) {
    require_nonneg(p.Z, "Z");
    require_nonneg(p.S, "S");
    require_nonneg(p.B, "B");
    require_nonneg(p.T, "T");
    require_nonneg(p.C, "C");
    require_nonneg(p.V, "V");
    require_fraction(p.delta, "delta");
    require_fraction(p.f_p, "f_p");
    require_fraction(p.f_n, "f_n");
    require_fraction(p.lambda, "lambda");
    if (p.n < 1) throw AssumptionViolated("n_lt_1", "need at least one validator");
    if (!(p.Z > p.B)) {
        throw AssumptionViolated("Z_le_B", "attack prize Z must exceed honest reward B");
    }
    if (!(p.delta * p.S > p.T)) {
        throw AssumptionViolated("deltaS_le_T",
                                 "challenger prize delta*S must exceed reward pool T");
    }
}

const char* to_string(AggregatorAction a) {
    return a == AggregatorAction::honest ? "honest" : "attack";
}

const char* to_string(ValidatorAction a) {
    switch (a) {
        case ValidatorAction::verify: return "verify";
        case ValidatorAction::free_ride: return "free_ride";
        default: return "blind_challenge";
    }
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::kyc: return "kyc";
        case Variant::non_kyc: return "non_kyc";
        default: return "tie_break";
    }
}

void validate_profile(const GameParams& p, const StrategyProfile& s) {
    if (s.validators.size() != static_cast<std::size_t>(p.n)) {
        throw ConfigError("profile has " + std::to_string(s.validators.size()) +
                          " validators, params say n = " + std::to_string(p.n));
    }
    if (!(s.beta >= 0.0 && s.beta <= 1.0)) {
        throw AssumptionViolated("beta_out_of_range", "beta must lie in [0,1]");
    }
    for (const auto& v : s.validators) {
        if (!(v.alpha >= 0.0 && v.alpha <= 1.0)) {
            throw AssumptionViolated("alpha_out_of_range", "alpha must lie in [0,1]");
        }
        if (!(v.gamma >= 0.0 && v.gamma <= 1.0)) {
            throw AssumptionViolated("gamma_out_of_range", "gamma must lie in [0,1]");
        }
        if (v.alpha + v.gamma > 1.0 + 1e-15) {
            throw AssumptionViolated("alpha_plus_gamma_out_of_range",
                                     "alpha + gamma must not exceed 1");
        }
        if (v.gamma > 0.0 && (p.n != 1 || s.variant != Variant::kyc)) {
            throw BlindChallengeUnsupported(
                "blind challenges exist only in the single-validator base game");
        }
    }
    if (s.variant == Variant::non_kyc) {
        if (!s.non_kyc) throw ConfigError("non_kyc profile payload missing");
        if (s.non_kyc->deposits.size() != s.validators.size()) {
            throw ConfigError("non_kyc deposits must list one stake per validator");
        }
        if (!(s.non_kyc->V_max > 0.0)) {
            throw AssumptionViolated("V_max_out_of_range", "V_max must be positive");
        }
        for (double d : s.non_kyc->deposits) {
            if (!(d >= 0.0 && d <= s.non_kyc->V_max)) {
                throw AssumptionViolated("deposit_out_of_range",
                                         "deposits must lie in [0, V_max]");
            }
        }
    } else if (s.non_kyc) {
        throw ConfigError("non_kyc payload present on a non non_kyc profile");
    }
    if (s.variant == Variant::tie_break) {
        if (!s.tie_break) throw ConfigError("tie_break profile payload missing");
        if (p.n != 1) {
            throw BadGroupSizes("tie_break variant is defined for n = 1");
        }
    } else if (s.tie_break) {
        throw ConfigError("tie_break payload present on a non tie_break profile");
    }
}

}  // namespace rollupgames
