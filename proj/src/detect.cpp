#include "specwm/detect.hpp"

#include <algorithm>
#include <cmath>

namespace specwm {

namespace {

constexpr double kLambdaMax = 1e6;
constexpr double kGoldenRelTol = 1e-10;

// log(e^x - 1) without overflow or cancellation.
double log_expm1(double x) {
    if (x > 33.0) {
        return x + std::log1p(-std::exp(-x));
    }
    return std::log(std::expm1(x));
}

// log((e^l - 1) / l), the shared factor of both null MGFs.
double log_expm1_over(double l) {
    if (l < 1e-4) {
        // (e^l - 1)/l = 1 + l/2 + l^2/6 + l^3/24 + O(l^4)
        return std::log1p(l / 2.0 + l * l / 6.0 + l * l * l / 24.0);
    }
    return log_expm1(l) - std::log(l);
}

// log(sinh(x) / x) for x > 0, stable at both ends.
double log_sinhc(double x) {
    if (x < 1e-4) {
        return std::log1p(x * x / 6.0 + x * x * x * x / 120.0);
    }
    if (x > 20.0) {
        return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0) - std::log(x);
    }
    return std::log(std::sinh(x) / x);
}

}  // namespace

double u_score(Token token, const WatermarkCode& code) {
    const Vocab n = code_size(code);
    if (token < 0 || token >= n) {
        throw InputError("token " + std::to_string(token) + " outside vocabulary of " +
                         std::to_string(n));
    }
    if (const auto* g = std::get_if<GumbelCode>(&code)) {
        return std::exp(-std::exp(-g->values[static_cast<std::size_t>(token)]));
    }
    const auto& rank = std::get<PermutationCode>(code).rank;
    return (static_cast<double>(rank[static_cast<std::size_t>(token)]) + 0.5) /
           static_cast<double>(n);
}

double log_mgf(Scheme scheme, double lambda, Vocab n) {
    if (!(lambda >= 0.0)) {
        throw InputError("lambda must be non-negative");
    }
    if (lambda == 0.0) {
        return 0.0;
    }
    if (scheme == Scheme::DeltaGumbel) {
        return log_expm1_over(lambda);
    }
    if (n < 2) {
        throw ConfigError("Gamma null needs a vocabulary size of at least 2");
    }
    // Discrete uniform on {(r + 1/2)/n}: log((e^l - 1) / (2n sinh(l / 2n))).
    return log_expm1_over(lambda) - log_sinhc(lambda / (2.0 * static_cast<double>(n)));
}

ChernoffResult chernoff_log_pvalue(double total_score, std::int64_t count,
                                   Scheme scheme, Vocab n) {
    if (count < 0 || !(total_score >= 0.0) || total_score > static_cast<double>(count)) {
        throw InputError("total score must lie in [0, count]");
    }
    if (count == 0) {
        return {0.0, 0.0};
    }
    const double c = static_cast<double>(count);
    const auto f = [&](double l) { return c * log_mgf(scheme, l, n) - l * total_score; };

    // The objective is convex with f(0) = 0 and f'(0) = count/2 - total; a
    // score at or below the null mean pins the minimum to lambda = 0.
    if (total_score <= c / 2.0) {
        return {0.0, 0.0};
    }

    // Derivative of log_mgf: tilted null mean, used only for bracketing.
    const auto tilted_mean = [&](double l) {
        double mean = 1.0 + 1.0 / std::expm1(l) - 1.0 / l;
        if (scheme == Scheme::Gamma) {
            const double x = l / (2.0 * static_cast<double>(n));
            // subtract coth(x)/(2n) - 1/l, folded together for stability
            mean += 1.0 / l - (1.0 + 2.0 / std::expm1(2.0 * x)) / (2.0 * static_cast<double>(n));
        }
        return mean;
    };

    double lo = 0.0;
    double hi = 1.0;
    while (hi < kLambdaMax && c * tilted_mean(hi) - total_score < 0.0) {
        lo = hi;
        hi = std::min(hi * 2.0, kLambdaMax);
    }

    // Golden-section minimization on [lo, hi].
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > kGoldenRelTol * (1.0 + b)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    const double lambda_star = (a + b) / 2.0;
    const double value = std::min({f(lambda_star), f1, f2, 0.0});
    return {value, lambda_star};
}

DetectionReport score_sequence(std::span<const Token> tokens,
                               std::span<const Token> prompt,
                               const WatermarkKey& key, Scheme scheme, int m,
                               Vocab n, std::vector<ScoreRecord>* records) {
    for (Token t : prompt) {
        if (t < 0 || t >= n) {
            throw InputError("prompt token outside vocabulary");
        }
    }
    std::vector<Token> ctx(prompt.begin(), prompt.end());
    ctx.reserve(prompt.size() + tokens.size());

    DetectionReport report;
    CodeHistory seen;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token x = tokens[i];
        if (x < 0 || x >= n) {
            throw InputError("token " + std::to_string(x) + " outside vocabulary of " +
                             std::to_string(n));
        }
        const ContextCode c = context_code(ctx, m, key.bytes);
        ctx.push_back(x);
        if (seen.contains(c)) {
            ++report.n_skipped;
            continue;
        }
        seen.insert(c);
        const double u = u_score(x, derive_code(c, key, scheme, n));
        report.total_u += u;
        ++report.n_scored;
        if (records != nullptr) {
            records->push_back({static_cast<std::int64_t>(i), x, c, u});
        }
    }
    if (report.n_scored > 0) {
        report.log_pvalue =
            chernoff_log_pvalue(report.total_u, report.n_scored, scheme, n).log_pvalue;
        report.anlppt = 0.0 - report.log_pvalue / static_cast<double>(report.n_scored);
    }
    return report;
}

}  // namespace specwm
