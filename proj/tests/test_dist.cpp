#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "specwm/dist.hpp"

using namespace specwm;

TEST_CASE("construction validates instead of rescaling") {
    CHECK_NOTHROW(TokenDist({0.5, 0.5}));
    CHECK_NOTHROW(TokenDist({1.0, 0.0, 0.0}));
    CHECK_THROWS_AS(TokenDist({1.0}), InvalidDistributionError);
    CHECK_THROWS_AS(TokenDist({0.6, 0.6}), InvalidDistributionError);
    CHECK_THROWS_AS(TokenDist({-0.1, 1.1}), InvalidDistributionError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(TokenDist({nan, 1.0}), InvalidDistributionError);
}

TEST_CASE("make_dist normalizes weights") {
    const TokenDist p = make_dist(std::vector<double>{2.0, 1.0, 1.0});
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(make_dist(std::vector<double>{0.0, 0.0}), InvalidDistributionError);
    CHECK_THROWS_AS(make_dist(std::vector<double>{1.0, -0.5}), InvalidDistributionError);
}

TEST_CASE("overlap and total variation") {
    const TokenDist p({0.5, 0.3, 0.2});
    const TokenDist q({0.2, 0.3, 0.5});
    CHECK(overlap(p, q) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(tv(p, q) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(overlap(p, p) == doctest::Approx(1.0).epsilon(1e-15));

    // tv must agree with the half-L1 form on random pairs.
    Rng rng(42);
    for (int t = 0; t < 50; ++t) {
        const Vocab n = 2 + static_cast<Vocab>(t % 7);
        const TokenDist a = random_dirichlet(n, rng);
        const TokenDist b = random_dirichlet(n, rng);
        double l1 = 0.0;
        for (Token i = 0; i < n; ++i) {
            l1 += std::fabs(a[i] - b[i]);
        }
        CHECK(tv(a, b) == doctest::Approx(0.5 * l1).epsilon(1e-12));
    }
    CHECK_THROWS_AS(overlap(TokenDist({0.5, 0.5}), TokenDist({0.3, 0.3, 0.4})),
                    DimensionError);
}

TEST_CASE("residual_plus is the normalized positive part") {
    const TokenDist p({0.5, 0.3, 0.2});
    const TokenDist q({0.2, 0.3, 0.5});
    const TokenDist r = residual_plus(p, q);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r[2] == doctest::Approx(0.0).epsilon(1e-15));

    const TokenDist a({0.6, 0.1, 0.3});
    const TokenDist b({0.2, 0.3, 0.5});
    const TokenDist rr = residual_plus(a, b);
    CHECK(rr[0] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(residual_plus(p, p), DegenerateResidualError);
}

TEST_CASE("sample_at walks the inverse CDF and skips holes") {
    const TokenDist p({0.0, 1.0, 0.0});
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        CHECK(sample(p, rng) == 1);
    }
    const TokenDist q({0.25, 0.0, 0.75});
    CHECK(sample_at(q, 0.0) == 0);
    CHECK(sample_at(q, 0.2499) == 0);
    CHECK(sample_at(q, 0.25) == 2);
    CHECK(sample_at(q, 0.999999) == 2);
    CHECK_THROWS_AS(sample_at(q, 1.0), InputError);
    CHECK_THROWS_AS(sample_at(q, -0.1), InputError);

    // Frequencies over many draws stay inside a 4-sigma binomial band.
    const TokenDist w({0.3, 0.7});
    const int trials = 100000;
    int ones = 0;
    Rng rng2(11);
    for (int t = 0; t < trials; ++t) {
        ones += sample(w, rng2);
    }
    const double phat = static_cast<double>(ones) / trials;
    const double se = std::sqrt(0.7 * 0.3 / trials);
    CHECK(std::fabs(phat - 0.7) < 4.0 * se);
}

TEST_CASE("entropy conventions") {
    CHECK(entropy(TokenDist({1.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(entropy(TokenDist({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(entropy(TokenDist({0.25, 0.25, 0.25, 0.25})) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("dirichlet draws live on the simplex") {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const TokenDist p = random_dirichlet(5, rng);
        double sum = 0.0;
        for (Token i = 0; i < 5; ++i) {
            CHECK(p[i] >= 0.0);
            sum += p[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("format/parse round-trip is exact") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const TokenDist p = random_dirichlet(4, rng);
        const TokenDist back = parse_dist(format_dist(p));
        for (Token i = 0; i < 4; ++i) {
            CHECK(back[i] == p[i]);
        }
    }
    CHECK_THROWS_AS(parse_dist("0.5, banana"), InputError);
    CHECK_THROWS_AS(parse_dist(""), InputError);
}
