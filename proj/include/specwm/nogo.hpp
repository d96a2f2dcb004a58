#pragma once

#include <string>
#include <vector>

#include "specwm/dist.hpp"
#include "specwm/gen.hpp"

namespace specwm {

// One scanned pair: alpha is the plain acceptance probability overlap(p, q),
// expected_reweighted_alpha averages overlap(R_e(p), R_e(q)) over every
// permutation code. Convexity forces gap >= 0 up to rounding; strictly
// positive gaps are the efficiency price of watermarking both sides.
struct GapReport {
    TokenDist p;
    TokenDist q;
    double alpha = 0.0;
    double expected_reweighted_alpha = 0.0;
    double gap = 0.0;  // alpha - expected_reweighted_alpha
};

// Average of overlap(gamma_reweight(p, e), gamma_reweight(q, e)) over all n!
// permutations in lexicographic order; n <= 8.
double expected_overlap_exact(const TokenDist& p, const TokenDist& q);

// Scan `points` independent simplex-uniform pairs at vocabulary size n
// (2 <= n <= 6). Throws InternalInvariantError if any gap falls below
// -1e-12, which would contradict convexity.
std::vector<GapReport> gap_scan(Vocab n, int points, Rng& rng);

// With p = q the MSE kernel must accept every draft (diagonal identically 1,
// unit acceptance under every permutation code), which leaves the draft
// reweight as the only randomness; unbiasedness of the output then requires
// the exact permutation average of the reweight to reproduce q.
struct EfficiencyReport {
    bool diagonal_identity = false;
    bool unit_acceptance_all_codes = false;
    bool draft_unbiased = false;
    double max_deviation = 0.0;
    int trials = 0;

    bool ok() const { return diagonal_identity && unit_acceptance_all_codes && draft_unbiased; }
};

EfficiencyReport verify_efficiency_implies_unbiased(Vocab n, int trials, Rng& rng);

// values[i][b] = F_i(b / 2^depth); each row has 2^depth + 1 finite entries.
// Values straying outside [0, 1] are reported as range-constraint violations.
struct DyadicFunctionTable {
    int depth = 0;
    std::vector<std::vector<double>> values;

    static DyadicFunctionTable identity(int n_functions, int depth);
};

struct FunctionEquationVerdict {
    bool forced_identity = false;
    std::string violation;  // empty when forced_identity
};

// Check the constraint system that pins every monotone solution of
// "sum x_i = 1 implies sum F_i(x_i) = 1" to the identity on the dyadic grid:
// boundary values, monotonicity, the x_1 = x_2 = 1/2 base case, per-depth
// halving instances, and the complementary pair instances that force all
// component functions to agree. Reports the first violated constraint.
FunctionEquationVerdict check_function_equation(const DyadicFunctionTable& table);

}  // namespace specwm
