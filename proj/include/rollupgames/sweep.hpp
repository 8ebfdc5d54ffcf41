#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rollupgames/extensions.hpp"
#include "rollupgames/params.hpp"

namespace rollupgames {

enum class SweepScale { linear, log };
enum class SweepTarget { loss_worst, loss_best, beta, equilibrium_count, Gamma_m, Delta_m };

const char* to_string(SweepScale s);
const char* to_string(SweepTarget t);
SweepScale sweep_scale_from_string(const std::string& s);
SweepTarget sweep_target_from_string(const std::string& s);

// param: one of Z,S,B,T,C,V,delta,f_p,f_n,n,D,V_max,V_star,m.
// steps = number of grid points, endpoints inclusive.
// m (optional) fixes the Gamma_m/Delta_m group size; defaults to the swept m
// or to n.
struct SweepSpec {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int steps = 2;
    SweepScale scale = SweepScale::linear;
    SweepTarget target = SweepTarget::loss_worst;
    int m = 0;
};

struct SweepRow {
    double value = 0.0;
    std::optional<double> target_value;  // empty on violating / infeasible points
    bool violates_assumptions = false;
    std::string note;
};

struct SweepContext {
    GameParams params;
    Variant variant = Variant::kyc;
    NonKycParams non_kyc{};
    TieBreakParams tie_break{};
};

std::vector<double> sweep_grid(const SweepSpec& spec);

std::vector<SweepRow> run_sweep(const SweepContext& ctx, const SweepSpec& spec);

}  // namespace rollupgames
