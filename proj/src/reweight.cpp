#include "specwm/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specwm/prf.hpp"

namespace specwm {

namespace {

constexpr double kUnitClamp = 1e-12;

std::uint8_t scheme_tag(Scheme s) {
    return s == Scheme::DeltaGumbel ? 0x01 : 0x02;
}

void check_size(Vocab have, Vocab want, const char* what) {
    if (have != want) {
        throw DimensionError(std::string(what) + " has length " + std::to_string(have) +
                             ", expected " + std::to_string(want));
    }
}

}  // namespace

double gumbel_from_unit(double u) {
    u = std::min(std::max(u, kUnitClamp), 1.0 - kUnitClamp);
    return -std::log(-std::log(u));
}

Scheme code_scheme(const WatermarkCode& code) {
    return std::holds_alternative<GumbelCode>(code) ? Scheme::DeltaGumbel : Scheme::Gamma;
}

Vocab code_size(const WatermarkCode& code) {
    if (const auto* g = std::get_if<GumbelCode>(&code)) {
        return static_cast<Vocab>(g->values.size());
    }
    return static_cast<Vocab>(std::get<PermutationCode>(code).rank.size());
}

void validate_code(const WatermarkCode& code, Vocab n) {
    if (code_size(code) != n) {
        throw InvalidCodeError("code length " + std::to_string(code_size(code)) +
                               " does not match vocabulary " + std::to_string(n));
    }
    if (const auto* g = std::get_if<GumbelCode>(&code)) {
        for (double v : g->values) {
            if (!std::isfinite(v)) {
                throw InvalidCodeError("non-finite Gumbel value");
            }
        }
        return;
    }
    const auto& rank = std::get<PermutationCode>(code).rank;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::int32_t r : rank) {
        if (r < 0 || r >= n || seen[static_cast<std::size_t>(r)]) {
            throw InvalidCodeError("rank vector is not a bijection");
        }
        seen[static_cast<std::size_t>(r)] = 1;
    }
}

WatermarkKey::WatermarkKey(std::vector<std::uint8_t> b) : bytes(std::move(b)) {
    if (bytes.empty()) {
        throw ConfigError("watermark key must be non-empty");
    }
}

WatermarkKey WatermarkKey::from_hex(const std::string& hex) {
    return WatermarkKey(parse_hex(hex));
}

WatermarkCode derive_code(const ContextCode& c, const WatermarkKey& key,
                          Scheme scheme, Vocab n) {
    if (n < 2) {
        throw ConfigError("vocabulary must have at least two tokens");
    }
    std::vector<std::uint8_t> material;
    material.reserve(c.digest.size() + key.bytes.size() + 1);
    material.insert(material.end(), c.digest.begin(), c.digest.end());
    material.insert(material.end(), key.bytes.begin(), key.bytes.end());
    material.push_back(scheme_tag(scheme));
    CounterStream stream(sha256(material));

    if (scheme == Scheme::DeltaGumbel) {
        GumbelCode code;
        code.values.resize(static_cast<std::size_t>(n));
        for (double& v : code.values) {
            v = gumbel_from_unit(next_unit(stream));
        }
        return code;
    }
    PermutationCode code;
    code.rank.resize(static_cast<std::size_t>(n));
    std::iota(code.rank.begin(), code.rank.end(), 0);
    shuffle_inplace(code.rank, stream);
    return code;
}

TokenDist delta_gumbel_reweight(const TokenDist& p, const GumbelCode& e) {
    const Vocab n = p.size();
    check_size(static_cast<Vocab>(e.values.size()), n, "Gumbel code");
    Token best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Vocab i = 0; i < n; ++i) {
        if (p[i] <= 0.0) {
            continue;  // zero-probability tokens can never win
        }
        const double score = std::log(p[i]) + e.values[static_cast<std::size_t>(i)];
        if (score > best_score) {  // strict: ties keep the lowest index
            best_score = score;
            best = i;
        }
    }
    if (best < 0) {
        throw InternalInvariantError("distribution with no positive entry");
    }
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    out[static_cast<std::size_t>(best)] = 1.0;
    return TokenDist(std::move(out));
}

TokenDist gamma_reweight(const TokenDist& p, const PermutationCode& e) {
    const Vocab n = p.size();
    validate_code(WatermarkCode(e), n);

    // inv[r] = token occupying slot r
    std::vector<Token> inv(static_cast<std::size_t>(n));
    for (Vocab t = 0; t < n; ++t) {
        inv[static_cast<std::size_t>(e.rank[static_cast<std::size_t>(t)])] = t;
    }

    std::vector<double> out(static_cast<std::size_t>(n));
    double cum = 0.0;
    double prev_a = 0.0;
    for (Vocab r = 0; r < n; ++r) {
        cum += p[inv[static_cast<std::size_t>(r)]];
        const double a = std::max(2.0 * cum - 1.0, 0.0);
        out[static_cast<std::size_t>(inv[static_cast<std::size_t>(r)])] = a - prev_a;
        prev_a = a;
    }
    return TokenDist(std::move(out));
}

TokenDist reweight(const TokenDist& p, const WatermarkCode& e) {
    if (const auto* g = std::get_if<GumbelCode>(&e)) {
        return delta_gumbel_reweight(p, *g);
    }
    return gamma_reweight(p, std::get<PermutationCode>(e));
}

TokenDist exact_mean_gamma(const TokenDist& p) {
    const Vocab n = p.size();
    if (n > 8) {
        throw EnumerationTooLargeError("cannot enumerate " + std::to_string(n) +
                                       "! permutations; vocabulary limit is 8");
    }
    PermutationCode perm;
    perm.rank.resize(static_cast<std::size_t>(n));
    std::iota(perm.rank.begin(), perm.rank.end(), 0);

    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    std::int64_t count = 0;
    do {
        const TokenDist r = gamma_reweight(p, perm);
        for (Vocab i = 0; i < n; ++i) {
            acc[static_cast<std::size_t>(i)] += r[i];
        }
        ++count;
    } while (std::next_permutation(perm.rank.begin(), perm.rank.end()));

    for (double& x : acc) {
        x /= static_cast<double>(count);
    }
    return TokenDist(std::move(acc));
}

GumbelCode random_gumbel_code(Vocab n, Rng& rng) {
    GumbelCode code;
    code.values.resize(static_cast<std::size_t>(n));
    for (double& v : code.values) {
        v = gumbel_from_unit(next_unit(rng));
    }
    return code;
}

PermutationCode random_permutation_code(Vocab n, Rng& rng) {
    PermutationCode code;
    code.rank.resize(static_cast<std::size_t>(n));
    std::iota(code.rank.begin(), code.rank.end(), 0);
    shuffle_inplace(code.rank, rng);
    return code;
}

McMean mc_mean(Scheme scheme, const TokenDist& p, std::int64_t samples, Rng& rng) {
    if (samples < 2) {
        throw ConfigError("need at least two samples");
    }
    const Vocab n = p.size();
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t s = 0; s < samples; ++s) {
        const TokenDist r = scheme == Scheme::DeltaGumbel
                                ? delta_gumbel_reweight(p, random_gumbel_code(n, rng))
                                : gamma_reweight(p, random_permutation_code(n, rng));
        for (Vocab i = 0; i < n; ++i) {
            sum[static_cast<std::size_t>(i)] += r[i];
            sumsq[static_cast<std::size_t>(i)] += r[i] * r[i];
        }
    }
    std::vector<double> mean(static_cast<std::size_t>(n));
    std::vector<double> se(static_cast<std::size_t>(n));
    const double ns = static_cast<double>(samples);
    for (std::size_t k = 0; k < mean.size(); ++k) {
        mean[k] = sum[k] / ns;
        const double var = std::max(sumsq[k] - ns * mean[k] * mean[k], 0.0) / (ns - 1.0);
        se[k] = std::sqrt(var / ns);
    }
    return McMean{TokenDist(std::move(mean)), std::move(se), samples};
}

}  // namespace specwm
