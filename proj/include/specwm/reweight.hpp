#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "specwm/context.hpp"
#include "specwm/dist.hpp"

namespace specwm {

enum class Scheme { DeltaGumbel, Gamma };

// One Gumbel value per token; the reweight collapses p onto the token
// maximizing log p_i + values[i].
struct GumbelCode {
    std::vector<double> values;
};

// rank[token] = slot of the token in a random bijection onto {0, ..., n-1}.
struct PermutationCode {
    std::vector<std::int32_t> rank;
};

using WatermarkCode = std::variant<GumbelCode, PermutationCode>;

Scheme code_scheme(const WatermarkCode& code);
Vocab code_size(const WatermarkCode& code);

// Structural validation: length n, finite values, bijective ranks.
void validate_code(const WatermarkCode& code, Vocab n);

// Secret key; non-empty, >= 16 bytes recommended.
struct WatermarkKey {
    std::vector<std::uint8_t> bytes;

    explicit WatermarkKey(std::vector<std::uint8_t> b);
    static WatermarkKey from_hex(const std::string& hex);
};

// Deterministic code for (context code, key, scheme, n). The seed is the
// SHA-256 of digest || key || scheme tag, expanded counter-mode; detection
// replays exactly this path.
WatermarkCode derive_code(const ContextCode& c, const WatermarkKey& key,
                          Scheme scheme, Vocab n);

// Point mass on argmax_i { log p_i + e_i : p_i > 0 }, ties to the lowest
// index.
TokenDist delta_gumbel_reweight(const TokenDist& p, const GumbelCode& e);

// With c_r the cumulative mass of p in rank order and A_r = max(2 c_r - 1, 0),
// token t gets A_{rank[t]} - A_{rank[t] - 1} (A_{-1} = 0).
TokenDist gamma_reweight(const TokenDist& p, const PermutationCode& e);

// Dispatch on the code variant.
TokenDist reweight(const TokenDist& p, const WatermarkCode& e);

// Average of gamma_reweight over all n! permutations in lexicographic order;
// n <= 8. Equals p up to rounding (unbiasedness).
TokenDist exact_mean_gamma(const TokenDist& p);

// Codes drawn directly from the code distribution (not keyed); shared by the
// Monte-Carlo estimators and the statistical tests.
GumbelCode random_gumbel_code(Vocab n, Rng& rng);
PermutationCode random_permutation_code(Vocab n, Rng& rng);

struct McMean {
    TokenDist mean;
    std::vector<double> se;  // per-coordinate standard error of the mean
    std::int64_t samples = 0;
};

// Monte-Carlo estimate of E[reweight(p, E)] over i.i.d. codes.
McMean mc_mean(Scheme scheme, const TokenDist& p, std::int64_t samples, Rng& rng);

// Uniform u mapped through the standard double-log transform; u is clamped
// to [1e-12, 1 - 1e-12] first so the result is always finite.
double gumbel_from_unit(double u);

}  // namespace specwm
