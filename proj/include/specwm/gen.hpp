#pragma once

#include <optional>
#include <span>
#include <vector>

#include "specwm/context.hpp"
#include "specwm/dist.hpp"
#include "specwm/reweight.hpp"

namespace specwm {

// Verification behavior of one speculative step.
//   Vanilla: accept on p_i/q_i, residual from (p - q)_+.
//   MWS:     both sides reweighted; acceptance compares R_E(p) to R_E(q),
//            so every emitted token is watermarked at full strength.
//   MSE:     drafts come from R_E(q) but acceptance still compares p to q,
//            so the acceptance rate matches the unwatermarked speculative
//            sampler exactly.
enum class Mode { Vanilla, MWS, MSE };

// Column-stochastic transition matrix; at(j, i) is the probability of
// emitting j given draft i. Built for exact verification; the generators
// use the equivalent scalar accept/residual path instead.
struct SpecKernel {
    Vocab n = 0;
    std::vector<double> a;  // row-major, a[j * n + i]

    double at(Vocab j, Vocab i) const {
        return a[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(i)];
    }
};

SpecKernel build_kernel(Mode mode, const TokenDist& p, const TokenDist& q,
                        const WatermarkCode* code = nullptr);

// Marginal output distribution when the draft token is distributed as d.
TokenDist apply_kernel(const SpecKernel& k, const TokenDist& d);

// Deterministic conditional distributions; context is the full token prefix
// (prompt plus everything generated so far).
struct LanguageModel {
    virtual ~LanguageModel() = default;

    virtual Vocab vocab_size() const = 0;
    virtual TokenDist next_dist(std::span<const Token> context) const = 0;
};

// What happened inside one speculative step.
struct StepTrace {
    std::vector<Token> drafts;            // K draft tokens
    std::vector<Token> emitted;           // accepted prefix + replacement/bonus
    std::vector<bool> skipped;            // K+1 flags; empty for vanilla steps
    int accepted_count = 0;
    std::optional<int> rejection_position;  // 0-based, unset when all accepted
    int degenerate_residuals = 0;           // replacement fallbacks (see below)
};

struct SpecStep {
    std::vector<Token> tokens;
    StepTrace trace;
};

// Ancestral sampling of n_tokens continuation tokens.
std::vector<Token> generate_basic(const LanguageModel& model,
                                  std::span<const Token> prompt, int n_tokens,
                                  Rng& rng);

// Token-by-token watermarked sampling: at each position the context code is
// checked against (and then added to) cch; fresh codes sample from the
// reweighted distribution, repeated codes fall back to the raw one.
std::vector<Token> generate_vuw(const LanguageModel& model,
                                std::span<const Token> prompt, int n_tokens,
                                Scheme scheme, const WatermarkKey& key,
                                CodeHistory& cch, int m, Rng& rng);

// One unwatermarked speculative step: draft k_draft tokens from `draft`,
// verify against `target`, emit the accepted prefix plus either a residual
// replacement or a bonus token.
SpecStep generate_vsps(const LanguageModel& target, const LanguageModel& draft,
                       std::span<const Token> prompt, int k_draft, Rng& rng);

// One watermarked speculative step under MWS or MSE. Context codes of all
// verified positions (accepted, rejected and bonus) are appended to cch;
// codes seen only by abandoned draft positions are discarded with the
// step-local draft history.
SpecStep generate_two_reweight(const LanguageModel& target,
                               const LanguageModel& draft,
                               std::span<const Token> prompt, int k_draft,
                               Mode mode, Scheme scheme, const WatermarkKey& key,
                               CodeHistory& cch, int m, Rng& rng);

}  // namespace specwm
