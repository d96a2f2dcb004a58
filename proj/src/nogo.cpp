#include "specwm/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specwm {

namespace {

constexpr double kGapTol = 1e-12;
constexpr double kGridTol = 1e-9;

std::string frac(long num, long den) {
    const long g = std::gcd(num, den);
    if (g > 0) {
        num /= g;
        den /= g;
    }
    if (den == 1) {
        return std::to_string(num);
    }
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace

double expected_overlap_exact(const TokenDist& p, const TokenDist& q) {
    if (p.size() != q.size()) {
        throw DimensionError("distributions have different sizes");
    }
    const Vocab n = p.size();
    if (n > 8) {
        throw EnumerationTooLargeError("cannot enumerate " + std::to_string(n) +
                                       "! permutations; vocabulary limit is 8");
    }
    PermutationCode perm;
    perm.rank.resize(static_cast<std::size_t>(n));
    std::iota(perm.rank.begin(), perm.rank.end(), 0);

    double acc = 0.0;
    std::int64_t count = 0;
    do {
        acc += overlap(gamma_reweight(p, perm), gamma_reweight(q, perm));
        ++count;
    } while (std::next_permutation(perm.rank.begin(), perm.rank.end()));
    return acc / static_cast<double>(count);
}

std::vector<GapReport> gap_scan(Vocab n, int points, Rng& rng) {
    if (n < 2 || n > 6) {
        throw ConfigError("gap scan supports vocabulary sizes 2 through 6");
    }
    if (points < 1) {
        throw ConfigError("need at least one scan point");
    }
    std::vector<GapReport> reports;
    reports.reserve(static_cast<std::size_t>(points));
    for (int s = 0; s < points; ++s) {
        TokenDist p = random_dirichlet(n, rng);
        TokenDist q = random_dirichlet(n, rng);
        const double alpha = overlap(p, q);
        const double expected = expected_overlap_exact(p, q);
        const double gap = alpha - expected;
        if (gap < -kGapTol) {
            throw InternalInvariantError("reweighted overlap exceeded the raw overlap by " +
                                         std::to_string(-gap));
        }
        reports.push_back({std::move(p), std::move(q), alpha, expected, gap});
    }
    return reports;
}

EfficiencyReport verify_efficiency_implies_unbiased(Vocab n, int trials, Rng& rng) {
    if (n < 2 || n > 5) {
        throw ConfigError("exact efficiency check supports vocabulary sizes 2 through 5");
    }
    if (trials < 1) {
        throw ConfigError("need at least one trial");
    }
    EfficiencyReport report;
    report.trials = trials;
    report.diagonal_identity = true;
    report.unit_acceptance_all_codes = true;
    report.draft_unbiased = true;

    PermutationCode perm;
    perm.rank.resize(static_cast<std::size_t>(n));

    for (int s = 0; s < trials; ++s) {
        const TokenDist q = random_dirichlet(n, rng);
        const SpecKernel k = build_kernel(Mode::MSE, q, q);
        for (Vocab i = 0; i < n; ++i) {
            const double dev = std::fabs(k.at(i, i) - 1.0);
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > kGapTol) {
                report.diagonal_identity = false;
            }
        }
        // Acceptance probability under each permutation code: the drafts come
        // from gamma_reweight(q, e), so it is sum_i A(i|i) * R_e(q)_i.
        std::iota(perm.rank.begin(), perm.rank.end(), 0);
        do {
            const TokenDist rq = gamma_reweight(q, perm);
            double accept = 0.0;
            for (Vocab i = 0; i < n; ++i) {
                accept += k.at(i, i) * rq[i];
            }
            const double dev = std::fabs(accept - 1.0);
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > kGapTol) {
                report.unit_acceptance_all_codes = false;
            }
        } while (std::next_permutation(perm.rank.begin(), perm.rank.end()));

        const TokenDist mean = exact_mean_gamma(q);
        for (Vocab i = 0; i < n; ++i) {
            const double dev = std::fabs(mean[i] - q[i]);
            report.max_deviation = std::max(report.max_deviation, dev);
            if (dev > kGapTol) {
                report.draft_unbiased = false;
            }
        }
    }
    return report;
}

DyadicFunctionTable DyadicFunctionTable::identity(int n_functions, int depth) {
    DyadicFunctionTable t;
    t.depth = depth;
    const std::size_t width = (1ull << depth) + 1;
    t.values.assign(static_cast<std::size_t>(n_functions), std::vector<double>(width));
    for (auto& row : t.values) {
        for (std::size_t b = 0; b < width; ++b) {
            row[b] = static_cast<double>(b) / static_cast<double>(width - 1);
        }
    }
    return t;
}

FunctionEquationVerdict check_function_equation(const DyadicFunctionTable& table) {
    const int d = table.depth;
    if (d < 1 || d > 24) {
        throw InputError("table depth must be in [1, 24]");
    }
    const std::size_t n = table.values.size();
    if (n < 3) {
        throw InputError("need at least three component functions");
    }
    const long top = 1l << d;
    const std::size_t width = static_cast<std::size_t>(top) + 1;
    for (const auto& row : table.values) {
        if (row.size() != width) {
            throw InputError("row has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(width));
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw InputError("table value is not finite");
            }
        }
    }

    // value of F_i at the depth-r dyadic b/2^r
    const auto at = [&](std::size_t i, long b, int r) {
        return table.values[i][static_cast<std::size_t>(b << (d - r))];
    };
    const auto fname = [](std::size_t i) { return "F_" + std::to_string(i + 1); };

    for (std::size_t i = 0; i < n; ++i) {
        for (long b = 0; b <= top; ++b) {
            const double v = at(i, b, d);
            if (v < -kGridTol || v > 1.0 + kGridTol) {
                return {false, "range constraint 0 <= " + fname(i) + "(" + frac(b, top) +
                                   ") <= 1 violated"};
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(table.values[i][0]) > kGridTol) {
            return {false, "boundary " + fname(i) + "(0) = 0 violated"};
        }
        if (std::fabs(table.values[i][width - 1] - 1.0) > kGridTol) {
            return {false, "boundary " + fname(i) + "(1) = 1 violated"};
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t b = 0; b + 1 < width; ++b) {
            if (table.values[i][b + 1] < table.values[i][b] - kGridTol) {
                return {false, fname(i) + " not monotone at x = " +
                                   frac(static_cast<long>(b) + 1, top)};
            }
        }
    }

    // Base case: the two-coordinate instance x_1 = x_2 = 1/2.
    if (std::fabs(at(0, 1, 1) + at(1, 1, 1) - 1.0) > kGridTol) {
        return {false, "sum rule at x_1 = x_2 = 1/2 violated"};
    }

    // Halving induction. New points at depth r are the odd numerators; each
    // gets one instance whose other coordinates live at depth < r or at
    // already-covered points of this depth.
    for (int r = 2; r <= d; ++r) {
        const long half = 1l << (r - 1);
        const long full = 1l << r;
        for (long b = 1; b < full; b += 2) {
            if (b < half) {
                const double s = at(0, b, r) + at(1, b, r) + at(2, half - b, r - 1);
                if (std::fabs(s - 1.0) > kGridTol) {
                    return {false, "depth-" + std::to_string(r) +
                                       " induction step: sum rule at x_1 = x_2 = " +
                                       frac(b, full) + ", x_3 = " + frac(half - b, half) +
                                       " violated"};
                }
            } else {
                const double s = at(0, b, r) + at(1, full - b, r);
                if (std::fabs(s - 1.0) > kGridTol) {
                    return {false, "depth-" + std::to_string(r) +
                                       " induction step: sum rule at x_1 = " + frac(b, full) +
                                       ", x_2 = " + frac(full - b, full) + " violated"};
                }
            }
        }
    }

    // Complementary pairs across every ordered pair of functions; these are
    // the zero-padded instances that force all F_i to coincide.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            for (long b = 0; b <= top; ++b) {
                const double s = at(i, b, d) + at(j, top - b, d);
                if (std::fabs(s - 1.0) > kGridTol) {
                    return {false, "pairwise sum rule " + fname(i) + "(x) + " + fname(j) +
                                       "(1-x) = 1 fails at x = " + frac(b, top)};
                }
            }
        }
    }

    // Implied by the instances above; kept as a belt-and-braces check.
    for (std::size_t i = 0; i < n; ++i) {
        for (long b = 0; b <= top; ++b) {
            const double want = static_cast<double>(b) / static_cast<double>(top);
            if (std::fabs(at(i, b, d) - want) > kGridTol) {
                return {false, fname(i) + "(" + frac(b, top) + ") detached from the grid identity"};
            }
        }
    }
    return {true, ""};
}

}  // namespace specwm
