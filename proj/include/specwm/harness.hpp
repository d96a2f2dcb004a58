#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specwm/detect.hpp"
#include "specwm/model.hpp"

namespace specwm {

enum class Method { Basic, VUW, VSpS, MWS, MSE };

std::string method_name(Method m);
std::string scheme_name(Scheme s);
Method parse_method(const std::string& name);
Scheme parse_scheme(const std::string& name);

struct BenchConfig {
    std::vector<Method> methods{Method::Basic, Method::VUW, Method::VSpS,
                                Method::MWS, Method::MSE};
    std::vector<Scheme> reweights{Scheme::DeltaGumbel, Scheme::Gamma};
    std::vector<int> ks{1, 2, 3, 4};
    int sequences = 200;
    int tokens = 100;  // target continuation length; speculative steps may overshoot by < K
    ToyModelSpec model{};
    int window = 5;
    std::uint64_t master_seed = 1;
    std::vector<std::uint8_t> key;  // empty: derived from the master seed
};

struct Stat {
    double mean = 0.0;
    double se = 0.0;  // sample stddev / sqrt(count)
    int count = 0;
};

Stat summarize_values(const std::vector<double>& values);

struct SeqResult {
    double aatps = 1.0;    // emitted tokens per speculative step
    double anlppt = 0.0;   // -log p-value per scored token
    double logppl = 0.0;   // mean -log P_target(token | context)
    double ptt_ms = 0.0;   // generation wall-clock per token; never gated on
    std::vector<Token> tokens;
};

struct CellResult {
    Method method = Method::Basic;
    std::optional<Scheme> reweight;
    int k = 0;  // 0 for methods without drafting
    std::vector<SeqResult> rows;
    Stat aatps, anlppt, logppl, ptt;
};

struct BenchResult {
    BenchConfig config;
    std::vector<CellResult> cells;
};

// Run every configured cell. Sequences get seeds and prompts derived from
// (master seed, cell, index), so results are identical for any thread count.
BenchResult run_benchmark(const BenchConfig& cfg, int threads);

const CellResult* find_cell(const BenchResult& r, Method method,
                            std::optional<Scheme> reweight, int k);

// CSV schema: method,reweight,k,metric,mean,stderr,n_sequences
void write_metrics_csv(const BenchResult& r, std::ostream& out);

// One line per sequence: "method,reweight,k,index: t0 t1 ...". Deterministic,
// used to pin down byte-identical generation across runs and thread counts.
void write_token_streams(const BenchResult& r, std::ostream& out);

// Human-readable summary table.
std::string summarize(const BenchResult& r);

// Flat "key = value" config files; '#' starts a comment. Unknown keys are
// rejected. Keys: methods, reweights, k, sequences, tokens, n, order,
// temperature, epsilon, model_seed, window, seed, key.
void apply_config_file(BenchConfig& cfg, std::istream& in);

// Cap from SPECWM_THREADS, defaulting to the hardware concurrency.
int thread_budget();

}  // namespace specwm
