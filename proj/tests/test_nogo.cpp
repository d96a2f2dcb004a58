#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "specwm/gen.hpp"
#include "specwm/nogo.hpp"

using namespace specwm;

namespace {

// Context-free model, used to connect the overlap average to the generator.
class FlatModel final : public LanguageModel {
public:
    explicit FlatModel(TokenDist d) : dist_(std::move(d)) {}
    Vocab vocab_size() const override { return dist_.size(); }
    TokenDist next_dist(std::span<const Token>) const override { return dist_; }

private:
    TokenDist dist_;
};

// Reference enumeration written independently of the library's: walk rank
// vectors with next_permutation and average the reweighted overlaps.
double enum_overlap(const TokenDist& p, const TokenDist& q) {
    std::vector<std::int32_t> rank(p.size());
    std::iota(rank.begin(), rank.end(), 0);
    double sum = 0.0;
    int count = 0;
    do {
        const PermutationCode e{rank};
        sum += overlap(gamma_reweight(p, e), gamma_reweight(q, e));
        ++count;
    } while (std::next_permutation(rank.begin(), rank.end()));
    return sum / count;
}

}  // namespace

TEST_CASE("expected reweighted overlap on hand-checked pairs") {
    const TokenDist p = make_dist(std::vector<double>{0.5, 0.3, 0.2});
    const TokenDist q = make_dist(std::vector<double>{0.2, 0.3, 0.5});
    CHECK(overlap(p, q) == doctest::Approx(0.7).epsilon(1e-15));
    // Per-permutation overlaps are 0.4, 1.0, 0.4, 0.4, 1.0, 0.4.
    CHECK(expected_overlap_exact(p, q) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(expected_overlap_exact(p, q) ==
          doctest::Approx(enum_overlap(p, q)).epsilon(1e-13));

    CHECK(expected_overlap_exact(p, p) == doctest::Approx(1.0).epsilon(1e-15));

    // A point-mass p is a fixed point of every reweight, so the average
    // overlap collapses to the mean reweighted q at that token, which
    // unbiasedness pins to q itself.
    const TokenDist point = make_dist(std::vector<double>{1.0, 0.0, 0.0, 0.0});
    const TokenDist q4 = make_dist(std::vector<double>{0.4, 0.1, 0.3, 0.2});
    CHECK(expected_overlap_exact(point, q4) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(expected_overlap_exact(point, point) == doctest::Approx(1.0).epsilon(1e-15));

    const TokenDist u9 = make_dist(std::vector<double>(9, 1.0));
    CHECK_THROWS_AS(expected_overlap_exact(u9, u9), EnumerationTooLargeError);
    CHECK_THROWS_AS(expected_overlap_exact(make_dist(std::vector<double>(3, 1.0)),
                                           make_dist(std::vector<double>(4, 1.0))),
                    DimensionError);
}

TEST_CASE("reweighting never helps the acceptance rate") {
    Rng rng(19);
    for (Vocab n = 2; n <= 6; ++n) {
        for (int s = 0; s < 50; ++s) {
            const TokenDist p = random_dirichlet(n, rng);
            const TokenDist q = random_dirichlet(n, rng);
            const double plain = overlap(p, q);
            const double reweighted = expected_overlap_exact(p, q);
            CHECK(reweighted <= plain + 1e-12);
            CHECK(reweighted == doctest::Approx(enum_overlap(p, q)).epsilon(1e-12));
            if (n == 2) {
                // Binary vocabularies sit exactly on the boundary: both
                // permutations together recover the plain overlap.
                CHECK(std::fabs(reweighted - plain) <= 1e-12);
            }
        }
    }
}

TEST_CASE("gap scan finds a certified positive gap at n = 3") {
    Rng rng(2026);
    const std::vector<GapReport> reports = gap_scan(3, 1000, rng);
    REQUIRE(reports.size() == 1000);
    double max_gap = 0.0;
    for (const GapReport& r : reports) {
        CHECK(r.alpha == doctest::Approx(overlap(r.p, r.q)).epsilon(1e-15));
        CHECK(r.gap == doctest::Approx(r.alpha - r.expected_reweighted_alpha)
                           .epsilon(1e-15));
        CHECK(r.gap >= -1e-12);
        max_gap = std::max(max_gap, r.gap);
    }
    CHECK(max_gap >= 0.01);
}

TEST_CASE("gap scan at n = 2 reports only zero gaps") {
    Rng rng(7);
    for (const GapReport& r : gap_scan(2, 500, rng)) {
        CHECK(std::fabs(r.gap) <= 1e-12);
    }
}

TEST_CASE("gap scan argument validation") {
    Rng rng(1);
    CHECK_THROWS_AS(gap_scan(1, 10, rng), ConfigError);
    CHECK_THROWS_AS(gap_scan(7, 10, rng), ConfigError);
    CHECK_THROWS_AS(gap_scan(3, 0, rng), ConfigError);
}

TEST_CASE("unit acceptance at p = q forces an unbiased reweight") {
    Rng rng(88);
    const EfficiencyReport r = verify_efficiency_implies_unbiased(4, 100, rng);
    CHECK(r.ok());
    CHECK(r.diagonal_identity);
    CHECK(r.unit_acceptance_all_codes);
    CHECK(r.draft_unbiased);
    CHECK(r.max_deviation <= 1e-12);
    CHECK(r.trials == 100);
    CHECK_THROWS_AS(verify_efficiency_implies_unbiased(1, 10, rng), ConfigError);
    CHECK_THROWS_AS(verify_efficiency_implies_unbiased(6, 10, rng), ConfigError);
    CHECK_THROWS_AS(verify_efficiency_implies_unbiased(4, 0, rng), ConfigError);
}

TEST_CASE("the identity table satisfies the constraint system") {
    for (int n : {3, 4, 6}) {
        for (int depth : {1, 2, 3, 5}) {
            const auto v = check_function_equation(DyadicFunctionTable::identity(n, depth));
            CHECK(v.forced_identity);
            CHECK(v.violation.empty());
        }
    }
}

TEST_CASE("each constraint family reports by name") {
    auto perturbed = [](int n, int depth, int i, int b, double value) {
        DyadicFunctionTable t = DyadicFunctionTable::identity(n, depth);
        t.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] = value;
        return check_function_equation(t);
    };

    const auto range = perturbed(3, 2, 0, 4, 1.05);
    CHECK_FALSE(range.forced_identity);
    CHECK(range.violation.find("range constraint") != std::string::npos);

    const auto boundary = perturbed(3, 2, 1, 0, 0.1);
    CHECK_FALSE(boundary.forced_identity);
    CHECK(boundary.violation.find("boundary") != std::string::npos);

    const auto monotone = perturbed(3, 2, 0, 1, 0.6);
    CHECK_FALSE(monotone.forced_identity);
    CHECK(monotone.violation.find("monotone") != std::string::npos);

    const auto base = perturbed(3, 1, 0, 1, 0.6);
    CHECK_FALSE(base.forced_identity);
    CHECK(base.violation.find("x_1 = x_2 = 1/2") != std::string::npos);

    const auto halving = perturbed(3, 2, 1, 1, 0.3);
    CHECK_FALSE(halving.forced_identity);
    CHECK(halving.violation.find("depth-2 induction") != std::string::npos);
}

TEST_CASE("every single-cell lattice perturbation is rejected") {
    const int depth = 3;
    const int width = (1 << depth) + 1;
    for (int i = 0; i < 3; ++i) {
        for (int b = 0; b < width; ++b) {
            for (int k = 0; k <= 10; ++k) {
                const double v = k / 10.0;
                DyadicFunctionTable t = DyadicFunctionTable::identity(3, depth);
                t.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] = v;
                const auto verdict = check_function_equation(t);
                const bool matches_identity = std::fabs(v - b / 8.0) < 1e-9;
                CHECK(verdict.forced_identity == matches_identity);
                if (!matches_identity) {
                    CHECK_FALSE(verdict.violation.empty());
                }
            }
        }
    }
}

TEST_CASE("function table structural validation") {
    CHECK_THROWS_AS(check_function_equation(DyadicFunctionTable::identity(2, 3)),
                    InputError);
    CHECK_THROWS_AS(check_function_equation(DyadicFunctionTable::identity(3, 0)),
                    InputError);

    DyadicFunctionTable short_row = DyadicFunctionTable::identity(3, 2);
    short_row.values[1].pop_back();
    CHECK_THROWS_AS(check_function_equation(short_row), InputError);

    DyadicFunctionTable nan_cell = DyadicFunctionTable::identity(3, 2);
    nan_cell.values[0][2] = std::nan("");
    CHECK_THROWS_AS(check_function_equation(nan_cell), InputError);
}

TEST_CASE("generator acceptance matches the exact overlap average") {
    const FlatModel target(make_dist(std::vector<double>{0.5, 0.3, 0.2}));
    const FlatModel draft(make_dist(std::vector<double>{0.2, 0.3, 0.5}));
    const std::vector<Token> prompt{0};
    const int trials = 50000;
    int accepted = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::uint8_t> kb(16, 0);
        for (int b = 0; b < 8; ++b) {
            kb[static_cast<std::size_t>(b)] =
                static_cast<std::uint8_t>((static_cast<std::uint64_t>(t) >> (8 * b)) & 0xff);
        }
        const WatermarkKey key{std::move(kb)};
        CodeHistory cch;
        Rng rng(mix64(40000 + static_cast<std::uint64_t>(t)));
        const SpecStep step = generate_two_reweight(target, draft, prompt, 1,
                                                    Mode::MWS, Scheme::Gamma,
                                                    key, cch, 5, rng);
        if (step.trace.accepted_count >= 1) {
            ++accepted;
        }
    }
    const double rate = static_cast<double>(accepted) / trials;
    const double se = std::sqrt(0.6 * 0.4 / trials);
    CHECK(std::fabs(rate - 0.6) < 4.0 * se);
}
