#include "specwm/dist.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace specwm {

namespace {

constexpr double kSumTol      = 1e-9;
constexpr double kResidualTol = 1e-12;

void check_same_size(const TokenDist& p, const TokenDist& q) {
    if (p.size() != q.size()) {
        throw DimensionError("distributions have sizes " + std::to_string(p.size()) +
                             " and " + std::to_string(q.size()));
    }
}

}  // namespace

TokenDist::TokenDist(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) {
        throw InvalidDistributionError("distribution needs at least two tokens");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) {  // also catches NaN
            throw InvalidDistributionError("negative or non-finite probability");
        }
        sum += p;
    }
    if (std::fabs(sum - 1.0) > kSumTol) {
        throw InvalidDistributionError("probabilities sum to " + std::to_string(sum));
    }
}

TokenDist make_dist(std::span<const double> weights) {
    if (weights.size() < 2) {
        throw InvalidDistributionError("distribution needs at least two tokens");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw InvalidDistributionError("negative or non-finite weight");
        }
        sum += w;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) {
        throw InvalidDistributionError("weights have no positive mass");
    }
    std::vector<double> probs(weights.begin(), weights.end());
    for (double& p : probs) {
        p /= sum;
    }
    return TokenDist(std::move(probs));
}

double overlap(const TokenDist& p, const TokenDist& q) {
    check_same_size(p, q);
    double acc = 0.0;
    for (Vocab i = 0; i < p.size(); ++i) {
        acc += std::min(p[i], q[i]);
    }
    return acc;
}

double tv(const TokenDist& p, const TokenDist& q) {
    return 1.0 - overlap(p, q);
}

TokenDist residual_plus(const TokenDist& p, const TokenDist& q) {
    check_same_size(p, q);
    std::vector<double> r(static_cast<std::size_t>(p.size()));
    double mass = 0.0;
    for (Vocab i = 0; i < p.size(); ++i) {
        r[static_cast<std::size_t>(i)] = std::max(p[i] - q[i], 0.0);
        mass += r[static_cast<std::size_t>(i)];
    }
    if (mass < kResidualTol) {
        throw DegenerateResidualError("residual mass " + std::to_string(mass) +
                                      " below " + std::to_string(kResidualTol));
    }
    for (double& x : r) {
        x /= mass;
    }
    return TokenDist(std::move(r));
}

Token sample_at(const TokenDist& p, double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw InputError("sampling value outside [0, 1)");
    }
    double acc = 0.0;
    Token last_positive = -1;
    for (Vocab i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) {
            continue;
        }
        last_positive = i;
        acc += p[i];
        if (u < acc) {
            return i;
        }
    }
    // u fell into the rounding slack past the last positive entry.
    if (last_positive < 0) {
        throw InternalInvariantError("distribution with no positive entry");
    }
    return last_positive;
}

double entropy(const TokenDist& p) {
    double h = 0.0;
    for (Vocab i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            h -= p[i] * std::log(p[i]);
        }
    }
    return h;
}

TokenDist random_dirichlet(Vocab n, Rng& rng) {
    if (n < 2) {
        throw InvalidDistributionError("distribution needs at least two tokens");
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    for (double& x : g) {
        // clamp keeps the exponential draw finite
        x = -std::log(std::max(next_unit(rng), 1e-300));
    }
    return make_dist(g);
}

std::string format_dist(const TokenDist& p) {
    std::string out;
    char buf[32];
    for (Vocab i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
        if (i > 0) {
            out += ',';
        }
        out += buf;
    }
    return out;
}

TokenDist parse_dist(const std::string& line) {
    std::vector<double> probs;
    const char* s = line.c_str();
    while (true) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s) {
            throw InputError("malformed distribution line: '" + line + "'");
        }
        probs.push_back(v);
        s = end;
        while (*s == ' ') {
            ++s;
        }
        if (*s == '\0') {
            break;
        }
        if (*s != ',') {
            throw InputError("malformed distribution line: '" + line + "'");
        }
        ++s;
    }
    return TokenDist(std::move(probs));
}

}  // namespace specwm
