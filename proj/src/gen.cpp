#include "specwm/gen.hpp"

#include <algorithm>
#include <cmath>

namespace specwm {

namespace {

std::size_t idx(Vocab j, Vocab i, Vocab n) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(i);
}

void check_tokens(std::span<const Token> tokens, Vocab n) {
    for (Token t : tokens) {
        if (t < 0 || t >= n) {
            throw InputError("token " + std::to_string(t) + " outside vocabulary of " +
                             std::to_string(n));
        }
    }
}

void check_same_vocab(const LanguageModel& target, const LanguageModel& draft) {
    if (target.vocab_size() != draft.vocab_size()) {
        throw DimensionError("target and draft models disagree on vocabulary size");
    }
}

// Replacement token after a rejection. Exact arithmetic guarantees positive
// residual mass whenever the acceptance test can fail; if rounding ever
// erases it, fall back to the draft token and count the event.
Token residual_or_draft(const TokenDist& p, const TokenDist& q, Token draft_token,
                        Rng& rng, StepTrace& trace) {
    try {
        return sample(residual_plus(p, q), rng);
    } catch (const DegenerateResidualError&) {
        ++trace.degenerate_residuals;
        return draft_token;
    }
}

}  // namespace

SpecKernel build_kernel(Mode mode, const TokenDist& p, const TokenDist& q,
                        const WatermarkCode* code) {
    if (p.size() != q.size()) {
        throw DimensionError("kernel endpoints have different sizes");
    }
    const Vocab n = p.size();

    // MSE and Vanilla share the same matrix: in MSE the code only changes
    // the draft distribution, never the acceptance rule.
    TokenDist pe = p;
    TokenDist qe = q;
    if (mode == Mode::MWS) {
        if (code == nullptr) {
            throw ConfigError("MWS kernel requires a watermark code");
        }
        validate_code(*code, n);
        pe = reweight(p, *code);
        qe = reweight(q, *code);
    }

    double z = 0.0;  // mass the draft side loses, sum_j (qe_j - pe_j)_+
    for (Vocab j = 0; j < n; ++j) {
        z += std::max(qe[j] - pe[j], 0.0);
    }

    SpecKernel k{n, std::vector<double>(static_cast<std::size_t>(n) *
                                        static_cast<std::size_t>(n), 0.0)};
    for (Vocab i = 0; i < n; ++i) {
        if (qe[i] <= 0.0) {
            // Token i can never be drafted; the identity column keeps the
            // matrix stochastic and carries zero weight under any draft.
            k.a[idx(i, i, n)] = 1.0;
            continue;
        }
        const double ratio = std::min(1.0, pe[i] / qe[i]);
        k.a[idx(i, i, n)] = ratio;
        if (ratio < 1.0) {  // implies z >= qe_i - pe_i > 0
            const double rej = 1.0 - ratio;
            for (Vocab j = 0; j < n; ++j) {
                if (j != i) {
                    k.a[idx(j, i, n)] = rej * std::max(pe[j] - qe[j], 0.0) / z;
                }
            }
        }
    }
    return k;
}

TokenDist apply_kernel(const SpecKernel& k, const TokenDist& d) {
    if (d.size() != k.n) {
        throw DimensionError("kernel and distribution have different sizes");
    }
    std::vector<double> out(static_cast<std::size_t>(k.n), 0.0);
    for (Vocab i = 0; i < k.n; ++i) {
        const double w = d[i];
        if (w == 0.0) {
            continue;
        }
        for (Vocab j = 0; j < k.n; ++j) {
            out[static_cast<std::size_t>(j)] += k.a[idx(j, i, k.n)] * w;
        }
    }
    return TokenDist(std::move(out));
}

std::vector<Token> generate_basic(const LanguageModel& model,
                                  std::span<const Token> prompt, int n_tokens,
                                  Rng& rng) {
    check_tokens(prompt, model.vocab_size());
    std::vector<Token> ctx(prompt.begin(), prompt.end());
    std::vector<Token> out;
    out.reserve(static_cast<std::size_t>(std::max(n_tokens, 0)));
    for (int t = 0; t < n_tokens; ++t) {
        const Token x = sample(model.next_dist(ctx), rng);
        out.push_back(x);
        ctx.push_back(x);
    }
    return out;
}

std::vector<Token> generate_vuw(const LanguageModel& model,
                                std::span<const Token> prompt, int n_tokens,
                                Scheme scheme, const WatermarkKey& key,
                                CodeHistory& cch, int m, Rng& rng) {
    const Vocab n = model.vocab_size();
    check_tokens(prompt, n);
    std::vector<Token> ctx(prompt.begin(), prompt.end());
    std::vector<Token> out;
    out.reserve(static_cast<std::size_t>(std::max(n_tokens, 0)));
    for (int t = 0; t < n_tokens; ++t) {
        const ContextCode c = context_code(ctx, m, key.bytes);
        const bool skipped = cch.contains(c);
        cch.insert(c);
        TokenDist p = model.next_dist(ctx);
        if (!skipped) {
            p = reweight(p, derive_code(c, key, scheme, n));
        }
        const Token x = sample(p, rng);
        out.push_back(x);
        ctx.push_back(x);
    }
    return out;
}

SpecStep generate_vsps(const LanguageModel& target, const LanguageModel& draft,
                       std::span<const Token> prompt, int k_draft, Rng& rng) {
    if (k_draft < 1) {
        throw ConfigError("speculative step needs at least one draft token");
    }
    check_same_vocab(target, draft);
    check_tokens(prompt, target.vocab_size());

    std::vector<Token> ctx(prompt.begin(), prompt.end());
    SpecStep step;
    StepTrace& tr = step.trace;

    std::vector<TokenDist> qs;
    qs.reserve(static_cast<std::size_t>(k_draft));
    for (int t = 0; t < k_draft; ++t) {
        qs.push_back(draft.next_dist(ctx));
        const Token x = sample(qs.back(), rng);
        tr.drafts.push_back(x);
        ctx.push_back(x);
    }

    std::vector<TokenDist> ps;
    ps.reserve(static_cast<std::size_t>(k_draft) + 1);
    const std::span<const Token> full(ctx);
    for (int t = 0; t <= k_draft; ++t) {
        ps.push_back(target.next_dist(full.subspan(0, prompt.size() + static_cast<std::size_t>(t))));
    }

    for (int t = 0; t < k_draft; ++t) {
        const Token x = tr.drafts[static_cast<std::size_t>(t)];
        const auto& qt = qs[static_cast<std::size_t>(t)];
        const auto& pt = ps[static_cast<std::size_t>(t)];
        if (qt[x] <= 0.0) {
            throw InternalInvariantError("drafted token has zero draft probability");
        }
        const double ratio = std::min(1.0, pt[x] / qt[x]);
        if (next_unit(rng) < ratio) {
            step.tokens.push_back(x);
            ++tr.accepted_count;
            continue;
        }
        tr.rejection_position = t;
        step.tokens.push_back(residual_or_draft(pt, qt, x, rng, tr));
        break;
    }
    if (tr.accepted_count == k_draft) {
        step.tokens.push_back(sample(ps[static_cast<std::size_t>(k_draft)], rng));
    }
    tr.emitted = step.tokens;
    return step;
}

SpecStep generate_two_reweight(const LanguageModel& target,
                               const LanguageModel& draft,
                               std::span<const Token> prompt, int k_draft,
                               Mode mode, Scheme scheme, const WatermarkKey& key,
                               CodeHistory& cch, int m, Rng& rng) {
    if (mode == Mode::Vanilla) {
        throw ConfigError("two-reweight step needs MWS or MSE");
    }
    if (k_draft < 1) {
        throw ConfigError("speculative step needs at least one draft token");
    }
    check_same_vocab(target, draft);
    const Vocab n = target.vocab_size();
    check_tokens(prompt, n);

    SpecStep step;
    StepTrace& tr = step.trace;

    // Draft phase. The skip rule runs against a step-local copy of the
    // history, so codes of positions that later get cut by a rejection do
    // not leak into the persistent history.
    CodeHistory draft_cch = cch;
    std::vector<Token> ctx(prompt.begin(), prompt.end());
    std::vector<ContextCode> codes(static_cast<std::size_t>(k_draft) + 1);
    std::vector<bool> skipped(static_cast<std::size_t>(k_draft) + 1);
    std::vector<std::optional<WatermarkCode>> ecodes(static_cast<std::size_t>(k_draft) + 1);
    std::vector<TokenDist> qs;          // raw draft distributions
    std::vector<TokenDist> qs_marked;   // distributions the drafts are sampled from
    qs.reserve(static_cast<std::size_t>(k_draft));
    qs_marked.reserve(static_cast<std::size_t>(k_draft));

    for (int t = 0; t <= k_draft; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        codes[ti] = context_code(ctx, m, key.bytes);
        skipped[ti] = draft_cch.contains(codes[ti]);
        draft_cch.insert(codes[ti]);
        if (!skipped[ti]) {
            ecodes[ti] = derive_code(codes[ti], key, scheme, n);
        }
        if (t == k_draft) {
            break;
        }
        qs.push_back(draft.next_dist(ctx));
        qs_marked.push_back(skipped[ti] ? qs.back() : reweight(qs.back(), *ecodes[ti]));
        const Token x = sample(qs_marked.back(), rng);
        tr.drafts.push_back(x);
        ctx.push_back(x);
    }

    std::vector<TokenDist> ps;
    std::vector<TokenDist> ps_marked;
    ps.reserve(static_cast<std::size_t>(k_draft) + 1);
    ps_marked.reserve(static_cast<std::size_t>(k_draft) + 1);
    const std::span<const Token> full(ctx);
    for (int t = 0; t <= k_draft; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        ps.push_back(target.next_dist(full.subspan(0, prompt.size() + ti)));
        ps_marked.push_back(skipped[ti] ? ps.back() : reweight(ps.back(), *ecodes[ti]));
    }
    tr.skipped = skipped;

    // Verification phase against the persistent history. Codes of verified
    // positions stay recorded whether the draft was accepted or not.
    for (int t = 0; t < k_draft; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        cch.insert(codes[ti]);
        const TokenDist& vp = mode == Mode::MWS ? ps_marked[ti] : ps[ti];
        const TokenDist& vq = mode == Mode::MWS ? qs_marked[ti] : qs[ti];
        const Token x = tr.drafts[ti];
        if (vq[x] <= 0.0) {
            throw InternalInvariantError("drafted token has zero verification probability");
        }
        const double ratio = std::min(1.0, vp[x] / vq[x]);
        if (next_unit(rng) < ratio) {
            step.tokens.push_back(x);
            ++tr.accepted_count;
            continue;
        }
        tr.rejection_position = t;
        step.tokens.push_back(residual_or_draft(vp, vq, x, rng, tr));
        break;
    }
    if (tr.accepted_count == k_draft) {
        cch.insert(codes[static_cast<std::size_t>(k_draft)]);
        step.tokens.push_back(sample(ps_marked[static_cast<std::size_t>(k_draft)], rng));
    }
    tr.emitted = step.tokens;
    return step;
}

}  // namespace specwm
