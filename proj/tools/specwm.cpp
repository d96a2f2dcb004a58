// specwm: generate, detect, benchmark, and verify watermarked speculative
// sampling on synthetic table models.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specwm/detect.hpp"
#include "specwm/harness.hpp"
#include "specwm/nogo.hpp"
#include "specwm/selftest.hpp"

using namespace specwm;

namespace {

TableModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open model file '" + path + "'");
    }
    return TableModel::load(in);
}

std::vector<Token> parse_tokens(const std::string& text, Vocab n) {
    std::vector<Token> out;
    std::istringstream in(text);
    long long v = 0;
    while (in >> v) {
        if (v < 0 || v >= n) {
            throw InputError("token " + std::to_string(v) + " outside vocabulary of size " +
                             std::to_string(n));
        }
        out.push_back(static_cast<Token>(v));
    }
    if (!in.eof()) {
        throw InputError("malformed token list: '" + text + "'");
    }
    return out;
}

void print_tokens(const std::vector<Token>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::printf("%s%d", i ? " " : "", tokens[i]);
    }
    std::printf("\n");
}

struct GenArgs {
    std::string model;
    std::string draft;
    std::string method = "basic";
    std::string scheme = "gumbel";
    std::string key_hex;
    std::string prompt;
    int k = 2;
    int tokens = 100;
    int window = 5;
    std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
    const TableModel target = load_model(a.model);
    const Method method = parse_method(a.method);
    const Scheme scheme = parse_scheme(a.scheme);
    const std::vector<Token> prompt = parse_tokens(a.prompt, target.vocab_size());
    Rng rng(a.seed);

    const bool needs_key = method == Method::VUW || method == Method::MWS ||
                           method == Method::MSE;
    const bool needs_draft = method == Method::VSpS || method == Method::MWS ||
                             method == Method::MSE;
    if (needs_key && a.key_hex.empty()) {
        throw ConfigError("method '" + a.method + "' requires --key");
    }
    if (needs_draft && a.draft.empty()) {
        throw ConfigError("method '" + a.method + "' requires --draft");
    }

    std::vector<Token> out;
    if (method == Method::Basic) {
        out = generate_basic(target, prompt, a.tokens, rng);
    } else if (method == Method::VUW) {
        const WatermarkKey key = WatermarkKey::from_hex(a.key_hex);
        CodeHistory cch;
        out = generate_vuw(target, prompt, a.tokens, scheme, key, cch, a.window, rng);
    } else {
        const TableModel draft = load_model(a.draft);
        if (draft.vocab_size() != target.vocab_size()) {
            throw ConfigError("target and draft vocabulary sizes differ");
        }
        std::vector<Token> ctx = prompt;
        CodeHistory cch;
        std::optional<WatermarkKey> key;
        if (needs_key) {
            key = WatermarkKey::from_hex(a.key_hex);
        }
        while (static_cast<int>(out.size()) < a.tokens) {
            SpecStep step;
            if (method == Method::VSpS) {
                step = generate_vsps(target, draft, ctx, a.k, rng);
            } else {
                const Mode mode = method == Method::MWS ? Mode::MWS : Mode::MSE;
                step = generate_two_reweight(target, draft, ctx, a.k, mode, scheme, *key,
                                             cch, a.window, rng);
            }
            out.insert(out.end(), step.tokens.begin(), step.tokens.end());
            ctx.insert(ctx.end(), step.tokens.begin(), step.tokens.end());
        }
    }
    print_tokens(out);
    return 0;
}

struct DetectArgs {
    std::string file;
    std::string key_hex;
    std::string scheme = "gumbel";
    std::string prompt;
    int window = 5;
    Vocab vocab = 0;
};

int run_detect(const DetectArgs& a) {
    const WatermarkKey key = WatermarkKey::from_hex(a.key_hex);
    const Scheme scheme = parse_scheme(a.scheme);
    const std::vector<Token> prompt = parse_tokens(a.prompt, a.vocab);

    std::ifstream file;
    std::istream* in = &std::cin;
    if (a.file != "-") {
        file.open(a.file);
        if (!file) {
            throw InputError("cannot open '" + a.file + "'");
        }
        in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
        const std::vector<Token> tokens = parse_tokens(line, a.vocab);
        if (tokens.empty()) {
            continue;
        }
        const DetectionReport r =
            score_sequence(tokens, prompt, key, scheme, a.window, a.vocab);
        nlohmann::json j{{"n_scored", r.n_scored},
                         {"n_skipped", r.n_skipped},
                         {"total_u", r.total_u},
                         {"log_pvalue", r.log_pvalue},
                         {"pvalue", std::exp(r.log_pvalue)},
                         {"anlppt", r.anlppt}};
        std::printf("%s\n", j.dump().c_str());
    }
    return 0;
}

struct BenchArgs {
    std::string config;
    std::string out_dir;
    std::vector<std::string> overrides;  // "key = value" lines from flags
};

int run_bench(const BenchArgs& a) {
    BenchConfig cfg;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) {
            throw InputError("cannot open config '" + a.config + "'");
        }
        apply_config_file(cfg, in);
    }
    if (!a.overrides.empty()) {
        std::string text;
        for (const std::string& line : a.overrides) {
            text += line;
            text += '\n';
        }
        std::istringstream in(text);
        apply_config_file(cfg, in);
    }

    const BenchResult result = run_benchmark(cfg, thread_budget());
    std::printf("%s", summarize(result).c_str());

    if (!a.out_dir.empty()) {
        std::filesystem::create_directories(a.out_dir);
        const auto metrics = std::filesystem::path(a.out_dir) / "metrics.csv";
        const auto tokens = std::filesystem::path(a.out_dir) / "tokens.txt";
        std::ofstream m(metrics);
        write_metrics_csv(result, m);
        std::ofstream t(tokens);
        write_token_streams(result, t);
        if (!m || !t) {
            throw InputError("failed writing results under '" + a.out_dir + "'");
        }
        std::printf("wrote %s and %s\n", metrics.c_str(), tokens.c_str());
    }
    return 0;
}

int run_verify(bool quick) {
    SelftestOptions opt;
    opt.quick = quick;
    opt.threads = thread_budget();
    const auto checks = run_acceptance(opt);
    for (const auto& c : checks) {
        std::printf("[%s] %-26s %6.1fs  %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.seconds, c.detail.c_str());
    }
    return all_passed(checks) ? 0 : 1;
}

int run_nogo(Vocab n, int points, std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<GapReport> reports = gap_scan(n, points, rng);
    std::printf("alpha,expected_reweighted_alpha,gap,p,q\n");
    const GapReport* best = nullptr;
    for (const GapReport& g : reports) {
        std::printf("%.17g,%.17g,%.17g,%s,%s\n", g.alpha, g.expected_reweighted_alpha,
                    g.gap, format_dist(g.p).c_str(), format_dist(g.q).c_str());
        if (!best || g.gap > best->gap) {
            best = &g;
        }
    }
    if (best) {
        std::printf("# max gap %.17g at p=[%s] q=[%s] (alpha %.17g -> %.17g)\n", best->gap,
                    format_dist(best->p).c_str(), format_dist(best->q).c_str(), best->alpha,
                    best->expected_reweighted_alpha);
    }
    return 0;
}

struct SynthArgs {
    std::string out_dir = ".";
    ToyModelSpec spec;
};

int run_synth(const SynthArgs& a) {
    const ModelPair pair = synth_models(a.spec);
    std::filesystem::create_directories(a.out_dir);
    const auto target = std::filesystem::path(a.out_dir) / "target.model";
    const auto draft = std::filesystem::path(a.out_dir) / "draft.model";
    std::ofstream t(target);
    pair.target.save(t);
    std::ofstream d(draft);
    pair.draft.save(d);
    if (!t || !d) {
        throw InputError("failed writing models under '" + a.out_dir + "'");
    }
    std::printf("wrote %s and %s\n", target.c_str(), draft.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"watermarked speculative sampling toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate one token sequence");
    gen_cmd->add_option("--model", gen.model, "target model file")->required();
    gen_cmd->add_option("--draft", gen.draft, "draft model file (speculative methods)");
    gen_cmd->add_option("--method", gen.method, "basic|vuw|vsps|mws|mse");
    gen_cmd->add_option("--scheme", gen.scheme, "gumbel|gamma");
    gen_cmd->add_option("--key", gen.key_hex, "watermark key, hex");
    gen_cmd->add_option("--prompt", gen.prompt, "space-separated prompt tokens");
    gen_cmd->add_option("--k", gen.k, "draft tokens per step");
    gen_cmd->add_option("--tokens", gen.tokens, "continuation length (lower bound)");
    gen_cmd->add_option("--window", gen.window, "context-code window");
    gen_cmd->add_option("--seed", gen.seed, "sampling seed");

    DetectArgs det;
    CLI::App* det_cmd = app.add_subcommand("detect", "score token sequences");
    det_cmd->add_option("file", det.file, "one sequence per line; '-' for stdin")
        ->required();
    det_cmd->add_option("--key", det.key_hex, "watermark key, hex")->required();
    det_cmd->add_option("--scheme", det.scheme, "gumbel|gamma");
    det_cmd->add_option("--window", det.window, "context-code window");
    det_cmd->add_option("--vocab", det.vocab, "vocabulary size")->required();
    det_cmd->add_option("--prompt", det.prompt, "prompt tokens preceding each line");

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run the benchmark matrix");
    bench_cmd->add_option("--config", bench.config, "key = value config file");
    bench_cmd->add_option("--out", bench.out_dir, "directory for metrics.csv/tokens.txt");
    // Flag overrides share the config-file parser, so they accept the same
    // comma-separated lists and win over file values.
    for (const char* key : {"methods", "reweights", "k", "sequences", "tokens", "n",
                            "order", "temperature", "epsilon", "model_seed", "window",
                            "seed", "key"}) {
        const std::string name = std::string("--") + key;
        bench_cmd
            ->add_option_function<std::string>(
                name,
                [&bench, key](const std::string& v) {
                    bench.overrides.push_back(std::string(key) + " = " + v);
                },
                std::string("override config key '") + key + "'");
    }

    bool quick = false;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the release check battery");
    verify_cmd->add_flag("--quick", quick, "reduced sample counts (smoke run)");

    Vocab nogo_n = 3;
    int nogo_points = 1000;
    std::uint64_t nogo_seed = 1;
    CLI::App* nogo_cmd =
        app.add_subcommand("nogo", "scan reweighted-overlap gaps (CSV)");
    nogo_cmd->add_option("--n", nogo_n, "vocabulary size (2..6)");
    nogo_cmd->add_option("--points", nogo_points, "number of (p, q) pairs");
    nogo_cmd->add_option("--seed", nogo_seed, "scan seed");

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic model pair");
    synth_cmd->add_option("--out", synth.out_dir, "output directory");
    synth_cmd->add_option("--n", synth.spec.n, "vocabulary size");
    synth_cmd->add_option("--order", synth.spec.order, "context length of the table");
    synth_cmd->add_option("--seed", synth.spec.seed, "model seed");
    synth_cmd->add_option("--temperature", synth.spec.temperature, "entropy knob");
    synth_cmd->add_option("--epsilon", synth.spec.draft_epsilon, "draft divergence");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            return run_gen(gen);
        }
        if (det_cmd->parsed()) {
            return run_detect(det);
        }
        if (bench_cmd->parsed()) {
            return run_bench(bench);
        }
        if (verify_cmd->parsed()) {
            return run_verify(quick);
        }
        if (nogo_cmd->parsed()) {
            return run_nogo(nogo_n, nogo_points, nogo_seed);
        }
        if (synth_cmd->parsed()) {
            return run_synth(synth);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "specwm: %s\n", e.what());
        return 2;
    }
    return 0;
}
