#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specwm/errors.hpp"
#include "specwm/rng.hpp"

namespace specwm {

// Tokens are dense indices into a vocabulary of size n.
using Token = std::int32_t;
using Vocab = std::int32_t;

// Probability distribution over {0, ..., n-1}. Entries are non-negative and
// sum to 1 within 1e-9; n >= 2. Construction validates, it does not rescale.
class TokenDist {
public:
    explicit TokenDist(std::vector<double> probs);

    Vocab size() const { return static_cast<Vocab>(probs_.size()); }
    double operator[](Token i) const { return probs_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

// Normalize a non-negative weight vector into a TokenDist.
TokenDist make_dist(std::span<const double> weights);

// sum_i min(p_i, q_i); equals the acceptance probability of one vanilla
// speculative step with target p and draft q.
double overlap(const TokenDist& p, const TokenDist& q);

// Total variation distance, computed as 1 - overlap(p, q).
double tv(const TokenDist& p, const TokenDist& q);

// (p - q)_+ normalized; the replacement distribution after a rejection.
// Throws DegenerateResidualError when the positive part carries < 1e-12 mass.
TokenDist residual_plus(const TokenDist& p, const TokenDist& q);

// Inverse-CDF sampling; u must be in [0, 1). Zero-probability tokens are
// never returned.
Token sample_at(const TokenDist& p, double u);

template <class Urbg>
Token sample(const TokenDist& p, Urbg& rng) {
    return sample_at(p, next_unit(rng));
}

// Shannon entropy in nats, with 0 * log 0 = 0.
double entropy(const TokenDist& p);

// Uniform draw from the probability simplex (normalized unit exponentials).
TokenDist random_dirichlet(Vocab n, Rng& rng);

// One distribution per line: comma-separated decimals, round-trip exact.
std::string format_dist(const TokenDist& p);
TokenDist parse_dist(const std::string& line);

}  // namespace specwm
