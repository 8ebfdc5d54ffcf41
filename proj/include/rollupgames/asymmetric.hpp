#pragma once

#include <array>
#include <string>
#include <vector>

#include "rollupgames/params.hpp"

namespace rollupgames {

// Expected prize shares and detection complements for a two-level profile:
// k validators verify with probability alpha1, m-k with alpha2, everyone
// else free-rides. With I ~ Binomial(k-1, alpha1) or Binomial(k, alpha1) and
// J ~ Binomial(m-k-1, alpha2) or Binomial(m-k, alpha2),
//   p1 = E[1/(I+J+1)] over (k-1, m-k)   group-1 verifier, peer counts
//   p2 = E[1/(I+J+1)] over (k, m-k-1)   group-2 verifier, peer counts
//   p3 = E[1/(I+J+2)] over (k-1, m-k-1)
//   p4 = E[1/(I+J+1)] over (k-1, m-k-1)
//   p5 = Pr[I = 0, J = 0] over (k-1, m-k-1)
struct CombinatorialTerms {
    double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0, p5 = 0.0;
    int k = 0, m = 0;
    double alpha1 = 0.0, alpha2 = 0.0;
};

CombinatorialTerms combinatorial_terms(double alpha1, double alpha2, int k, int m);

struct AsymSolution {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;
    // Re-evaluated residuals of the three equilibrium equations:
    // cross-group verifier indifference, mixer/aggregator beta equation,
    // aggregator indifference constraint.
    std::array<double, 3> residuals{};
    double loss = 0.0;
    int k = 0, m = 0, n = 0;
    int branch = 0;  // root index within the (k, R) cell, ascending alpha1
};

// Roots of the asymmetric indifference system with group sizes (k, m-k)
// among m mixers, n-m free-riders outside. Only k <= m-k is searched (the
// smaller group verifies more); 2k > m returns an empty set. Throws
// NoAdmissibleRoot when the interval brackets no root.
std::vector<AsymSolution> solve_asymmetric(const GameParams& p, int m, int k);

// Raw indifference residuals (group-1 verify-vs-free, group-2 verify-vs-free)
// at an arbitrary (alpha1, alpha2, beta), in money units.
std::array<double, 2> asym_indifference_residuals(const GameParams& p, int m, int k,
                                                  double alpha1, double alpha2,
                                                  double beta);

struct AsymSweepRow {
    int k = 0;
    double R = 0.0;
    int branch = 0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta = 0.0;
    double loss = 0.0;
    double residual_max = 0.0;
};

// For each target R, rescales T = n(R delta S - f_p V) at fixed delta S and
// solves every admissible k. Per-cell failures are recorded in `notes` (if
// given) and do not abort the sweep.
std::vector<AsymSweepRow> sweep_k(const GameParams& p, int m,
                                  const std::vector<double>& R_grid,
                                  std::vector<std::string>* notes = nullptr);

}  // namespace rollupgames
