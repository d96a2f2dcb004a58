#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "specwm/context.hpp"
#include "specwm/reweight.hpp"

namespace specwm {

// Per-token score in [0, 1]. Under unwatermarked text the score is exactly
// uniform: continuous U(0, 1) for DeltaGumbel, the discrete uniform on
// {(r + 1/2) / n} for Gamma.
double u_score(Token token, const WatermarkCode& code);

// log E[exp(lambda * U)] under the null score distribution; lambda >= 0.
// n is the vocabulary size (used by Gamma only). Stable for lambda near 0
// and up to the optimizer cap.
double log_mgf(Scheme scheme, double lambda, Vocab n);

struct ChernoffResult {
    double log_pvalue = 0.0;  // always <= 0
    double lambda_star = 0.0;
};

// Optimized Chernoff bound: min over lambda in [0, 1e6] of
// count * log_mgf(lambda) - lambda * total_score. Bracketed by doubling
// from lambda = 1, then golden-section to relative tolerance 1e-10.
ChernoffResult chernoff_log_pvalue(double total_score, std::int64_t count,
                                   Scheme scheme, Vocab n);

struct ScoreRecord {
    std::int64_t position = 0;  // index into the scored token span
    Token token = 0;
    ContextCode code;
    double u = 0.0;
};

struct DetectionReport {
    std::int64_t n_scored = 0;
    std::int64_t n_skipped = 0;
    double total_u = 0.0;
    double log_pvalue = 0.0;
    double anlppt = 0.0;  // -log_pvalue / n_scored, 0 when nothing scored
};

// Re-derive each position's context code from (key, window), score the first
// occurrence of every code and skip repeats; exactly the generator's PRF
// path, so no generation-side state is needed.
DetectionReport score_sequence(std::span<const Token> tokens,
                               std::span<const Token> prompt,
                               const WatermarkKey& key, Scheme scheme, int m,
                               Vocab n,
                               std::vector<ScoreRecord>* records = nullptr);

}  // namespace specwm
