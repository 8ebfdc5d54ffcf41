#include "rollupgames/extensions.hpp"

#include <cmath>

#include "rollupgames/oracle.hpp"

namespace rollupgames {

void validate_nonkyc(const NonKycParams& nk) {
    if (!(nk.V_max > 0.0)) {
        throw AssumptionViolated("V_max_out_of_range", "V_max must be positive");
    }
    if (!(0.0 <= nk.V_min && nk.V_min <= nk.V_star && nk.V_star <= nk.V_max)) {
        throw AssumptionViolated("V_order", "need 0 <= V_min <= V_star <= V_max");
    }
}

EquilibriumResult nonkyc_two_validator_equilibrium(const GameParams& p,
                                                   const NonKycParams& nk) {
    validate_params(p);
    validate_nonkyc(nk);
    if (p.n != 2) throw BadGroupSizes("non-KYC analysis needs n = 2");

    const double A = damage_ratio(p);
    const double alpha = alpha_sym(A, 2);
    const double dS = p.delta * p.S;
    const double half_share = p.T / 2.0;
    // Honest-round reward of a verifier whose peer free-rides: stakes V_max
    // against V_star.
    const double w = nk.V_max * p.T / (nk.V_max + nk.V_star);

    const double den =
        dS * (1.0 - alpha / 2.0) + alpha * (half_share + p.f_p * nk.V_star) - w;
    if (!(den > 0.0)) {
        throw NegativeDenominator("non-KYC indifference denominator is not positive");
    }
    const double num = p.C - w + half_share;
    if (num < 0.0) {
        throw NegativeBeta("non-KYC beta numerator C - W + T/2 is negative");
    }
    const double beta = num / den;

    StrategyProfile s;
    s.beta = beta;
    s.validators = {{alpha, 0.0}, {alpha, 0.0}};
    s.variant = Variant::non_kyc;
    s.non_kyc = NonKycProfile{nk.V_max, {nk.V_star, nk.V_star}};

    EquilibriumResult r;
    r.kind = EquilibriumKind::nonkyc;
    r.m = 2;
    r.feasibility = {
        FeasibilityEntry{"beta_positive", beta >= 0.0, beta},
        FeasibilityEntry{"beta_le_1", beta <= 1.0, 1.0 - beta},
    };
    r.loss = system_loss(p, s);
    r.profile = std::move(s);
    return r;
}

std::pair<double, double> payoff_tiebreak(const GameParams& p, const TieBreakParams& tb,
                                          double alpha, double beta, AggregatorAction a,
                                          ValidatorAction v) {
    if (v == ValidatorAction::blind_challenge) {
        throw BlindChallengeUnsupported("no blind challenges in the tie-break game");
    }
    if (a == AggregatorAction::honest) {
        return {p.B, v == ValidatorAction::verify ? p.T - p.C : p.T};
    }
    if (v == ValidatorAction::verify) {
        return {-p.S - alpha * beta * tb.D, p.delta * p.S - p.C};
    }
    return {p.Z, p.T};
}

double tiebreak_alpha(const GameParams& p, const TieBreakParams& tb, double beta,
                      double Z) {
    if (!(Z > p.B)) {
        throw AssumptionViolated("Z_le_B", "attack prize Z must exceed honest reward B");
    }
    const double b = Z + p.S;
    const double quad = 2.0 * beta * tb.D;
    if (std::abs(quad) <= 1e-12 * b) {
        return (Z - p.B) / b;
    }
    const double disc = b * b + 4.0 * quad * (Z - p.B);
    if (disc < 0.0) {
        throw NoAdmissibleRoot("tie-break quadratic has no real root");
    }
    // Root written so it stays finite and tends to (Z-B)/(Z+S) as D -> 0.
    const double alpha = 2.0 * (Z - p.B) / (b + std::sqrt(disc));
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw NoAdmissibleRoot("tie-break root outside (0,1)");
    }
    return alpha;
}

namespace {

double tiebreak_beta(const GameParams& p) {
    const double beta = p.C / (p.delta * p.S - p.T);
    if (beta > 1.0) {
        throw NoAdmissibleRoot("validator indifference needs beta <= 1");
    }
    return beta;
}

}  // namespace

TieBreakDerivative tiebreak_dEA_dZ(const GameParams& p, const TieBreakParams& tb,
                                   double Z) {
    validate_params(p);
    const double beta = tiebreak_beta(p);
    const double alpha = tiebreak_alpha(p, tb, beta, Z);
    const double den = 4.0 * alpha * beta * tb.D + p.S + Z;
    if (std::abs(den) < 1e-12 * (p.S + Z)) {
        throw SingularDenominator("d alpha / dZ denominator vanished");
    }
    const double dalpha_dZ = (1.0 - alpha) / den;
    return {2.0 * alpha * beta * beta * tb.D * dalpha_dZ, alpha, beta};
}

EquilibriumResult tiebreak_equilibrium(const GameParams& p, const TieBreakParams& tb) {
    validate_params(p);
    if (p.n != 1) throw BadGroupSizes("tie-break analysis needs n = 1");
    const double beta = tiebreak_beta(p);
    const double alpha = tiebreak_alpha(p, tb, beta, p.Z);

    StrategyProfile s;
    s.beta = beta;
    s.validators = {{alpha, 0.0}};
    s.variant = Variant::tie_break;
    s.tie_break = TieBreakProfile{tb.D};

    EquilibriumResult r;
    r.kind = EquilibriumKind::tie_break;
    r.m = 1;
    r.feasibility = {
        FeasibilityEntry{"beta_positive", beta >= 0.0, beta},
        FeasibilityEntry{"beta_le_1", beta <= 1.0, 1.0 - beta},
    };
    r.loss = system_loss(p, s);
    r.profile = std::move(s);
    return r;
}

}  // namespace rollupgames
