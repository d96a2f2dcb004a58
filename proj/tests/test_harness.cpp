#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "specwm/harness.hpp"

using namespace specwm;

namespace {

BenchConfig tiny_config() {
    BenchConfig cfg;
    cfg.ks = {1, 2};
    cfg.sequences = 4;
    cfg.tokens = 16;
    cfg.model.n = 16;
    cfg.model.order = 1;
    cfg.model.seed = 5;
    cfg.window = 4;
    cfg.master_seed = 3;
    return cfg;
}

// Timing rows vary run to run; everything else must not.
std::string without_timing_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find(",ptt_ms,") == std::string::npos) {
            out << line << '\n';
        }
    }
    return out.str();
}

std::string metrics_csv(const BenchResult& r) {
    std::ostringstream out;
    write_metrics_csv(r, out);
    return out.str();
}

std::string token_streams(const BenchResult& r) {
    std::ostringstream out;
    write_token_streams(r, out);
    return out.str();
}

double mean_row_overlap(const ModelPair& models) {
    double sum = 0.0;
    for (std::size_t i = 0; i < models.target.row_count(); ++i) {
        sum += overlap(models.target.row(i), models.draft.row(i));
    }
    return sum / static_cast<double>(models.target.row_count());
}

}  // namespace

TEST_CASE("a zero-noise draft is the target") {
    ToyModelSpec spec;
    spec.n = 12;
    spec.order = 1;
    spec.seed = 4;
    spec.draft_epsilon = 0.0;
    const ModelPair models = synth_models(spec);
    REQUIRE(models.target.row_count() == models.draft.row_count());
    for (std::size_t i = 0; i < models.target.row_count(); ++i) {
        const auto& t = models.target.row(i).probs();
        const auto& d = models.draft.row(i).probs();
        for (std::size_t j = 0; j < t.size(); ++j) {
            CHECK(std::fabs(t[j] - d[j]) <= 1e-12);
        }
    }

    // With identical models every speculative step emits its full budget.
    Rng rng(11);
    std::vector<Token> ctx{0};
    for (int s = 0; s < 20; ++s) {
        const SpecStep step = generate_vsps(models.target, models.draft, ctx, 3, rng);
        CHECK(step.tokens.size() == 4);
        CHECK(step.trace.accepted_count == 3);
        ctx.insert(ctx.end(), step.tokens.begin(), step.tokens.end());
    }
}

TEST_CASE("draft noise lowers the row overlap monotonically") {
    ToyModelSpec mild;
    mild.n = 32;
    mild.order = 1;
    mild.seed = 10;
    mild.draft_epsilon = 0.1;
    ToyModelSpec heavy = mild;
    heavy.draft_epsilon = 1.0;
    const double mild_overlap = mean_row_overlap(synth_models(mild));
    const double heavy_overlap = mean_row_overlap(synth_models(heavy));
    CHECK(mild_overlap > 0.85);
    CHECK(heavy_overlap < mild_overlap);
}

TEST_CASE("low temperature sharpens the rows") {
    ToyModelSpec spec;
    spec.n = 32;
    spec.order = 1;
    spec.seed = 12;
    ToyModelSpec cold = spec;
    cold.temperature = 5e-4;

    const ModelPair warm = synth_models(spec);
    const ModelPair sharp = synth_models(cold);
    double warm_entropy = 0.0, cold_entropy = 0.0;
    for (std::size_t i = 0; i < warm.target.row_count(); ++i) {
        warm_entropy += entropy(warm.target.row(i));
        cold_entropy += entropy(sharp.target.row(i));
    }
    warm_entropy /= static_cast<double>(warm.target.row_count());
    cold_entropy /= static_cast<double>(sharp.target.row_count());
    CHECK(warm_entropy > 1.0);
    CHECK(cold_entropy < 0.01);
}

TEST_CASE("table model save and load round-trips exactly") {
    ToyModelSpec spec;
    spec.n = 8;
    spec.order = 2;
    spec.seed = 77;
    const ModelPair models = synth_models(spec);

    std::stringstream buf;
    models.target.save(buf);
    const TableModel loaded = TableModel::load(buf);
    REQUIRE(loaded.row_count() == models.target.row_count());
    CHECK(loaded.vocab_size() == 8);
    CHECK(loaded.order() == 2);
    for (std::size_t i = 0; i < loaded.row_count(); ++i) {
        CHECK(loaded.row(i).probs() == models.target.row(i).probs());
    }

    // Short contexts are left-padded with token 0; long ones keep the suffix.
    const std::vector<Token> shortctx{5};
    const std::vector<Token> padded{0, 5};
    CHECK(loaded.next_dist(shortctx).probs() == loaded.next_dist(padded).probs());
    const std::vector<Token> longctx{1, 2, 3, 4};
    const std::vector<Token> suffix{3, 4};
    CHECK(loaded.next_dist(longctx).probs() == loaded.next_dist(suffix).probs());
}

TEST_CASE("table model load rejects malformed input") {
    std::istringstream bad_header("x y\n");
    CHECK_THROWS_AS(TableModel::load(bad_header), InputError);
    std::istringstream missing_rows("4 1\n0.25,0.25,0.25,0.25\n");
    CHECK_THROWS_AS(TableModel::load(missing_rows), InputError);
    std::istringstream bad_row("2 1\n0.5,0.5\nnot,numbers\n");
    CHECK_THROWS_AS(TableModel::load(bad_row), InputError);
}

TEST_CASE("summary statistics") {
    const Stat s = summarize_values({1.0, 2.0, 3.0});
    CHECK(s.count == 3);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s.se == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

    const Stat flat = summarize_values({4.0, 4.0, 4.0, 4.0});
    CHECK(flat.mean == 4.0);
    CHECK(flat.se == 0.0);

    CHECK(summarize_values({}).count == 0);
    CHECK(summarize_values({7.0}).se == 0.0);
}

TEST_CASE("benchmark output is identical across thread counts and reruns") {
    const BenchConfig cfg = tiny_config();
    const BenchResult serial = run_benchmark(cfg, 1);
    const BenchResult threaded = run_benchmark(cfg, 3);
    const BenchResult again = run_benchmark(cfg, 1);

    CHECK(token_streams(serial) == token_streams(threaded));
    CHECK(token_streams(serial) == token_streams(again));
    CHECK(without_timing_rows(metrics_csv(serial)) ==
          without_timing_rows(metrics_csv(threaded)));
    CHECK(without_timing_rows(metrics_csv(serial)) ==
          without_timing_rows(metrics_csv(again)));
}

TEST_CASE("metrics CSV schema") {
    const BenchConfig cfg = tiny_config();
    const BenchResult r = run_benchmark(cfg, 2);

    std::istringstream in(metrics_csv(r));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "method,reweight,k,metric,mean,stderr,n_sequences");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::size_t commas = 0;
        for (char ch : line) {
            commas += ch == ',';
        }
        CHECK(commas == 6);
        CHECK(line.substr(line.rfind(',') + 1) == "4");
    }
    // Four metric rows per cell: basic, vuw x2, vsps x2, (mws + mse) x2x2.
    CHECK(rows == 4u * (1 + 2 + 2 + 8));

    const CellResult* baseline = find_cell(r, Method::Basic, std::nullopt, 0);
    REQUIRE(baseline != nullptr);
    CHECK(baseline->aatps.mean == 1.0);
    CHECK(baseline->aatps.se == 0.0);
    const CellResult* mws = find_cell(r, Method::MWS, Scheme::Gamma, 2);
    REQUIRE(mws != nullptr);
    CHECK(mws->k == 2);
    CHECK(find_cell(r, Method::MWS, Scheme::Gamma, 9) == nullptr);
    CHECK(find_cell(r, Method::Basic, Scheme::Gamma, 0) == nullptr);
}

TEST_CASE("benchmark configuration validation") {
    BenchConfig cfg = tiny_config();
    cfg.methods.clear();
    CHECK_THROWS_AS(run_benchmark(cfg, 1), ConfigError);

    cfg = tiny_config();
    cfg.ks = {2, 0};
    CHECK_THROWS_AS(run_benchmark(cfg, 1), ConfigError);

    cfg = tiny_config();
    cfg.sequences = 0;
    CHECK_THROWS_AS(run_benchmark(cfg, 1), ConfigError);

    cfg = tiny_config();
    cfg.reweights.clear();
    CHECK_THROWS_AS(run_benchmark(cfg, 1), ConfigError);

    // Without watermarked methods the reweight list may be empty.
    cfg.methods = {Method::Basic, Method::VSpS};
    cfg.sequences = 2;
    cfg.tokens = 8;
    const BenchResult r = run_benchmark(cfg, 1);
    CHECK(r.cells.size() == 3);
}

TEST_CASE("config files set every field") {
    std::istringstream in(
        "# benchmark shape\n"
        "methods = basic, mws\n"
        "reweights = gamma\n"
        "k = 2, 3\n"
        "sequences = 6\n"
        "tokens = 32\n"
        "\n"
        "n = 24            # model\n"
        "order = 1\n"
        "temperature = 0.7\n"
        "epsilon = 0.25\n"
        "model_seed = 9\n"
        "window = 3\n"
        "seed = 42\n"
        "key = 00ff10ab\n");
    BenchConfig cfg;
    apply_config_file(cfg, in);
    CHECK(cfg.methods == std::vector<Method>{Method::Basic, Method::MWS});
    CHECK(cfg.reweights == std::vector<Scheme>{Scheme::Gamma});
    CHECK(cfg.ks == std::vector<int>{2, 3});
    CHECK(cfg.sequences == 6);
    CHECK(cfg.tokens == 32);
    CHECK(cfg.model.n == 24);
    CHECK(cfg.model.order == 1);
    CHECK(cfg.model.temperature == doctest::Approx(0.7));
    CHECK(cfg.model.draft_epsilon == doctest::Approx(0.25));
    CHECK(cfg.model.seed == 9);
    CHECK(cfg.window == 3);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.key == std::vector<std::uint8_t>{0x00, 0xff, 0x10, 0xab});
}

TEST_CASE("config file errors carry line numbers") {
    BenchConfig cfg;
    std::istringstream unknown("sequences = 5\nbogus = 1\n");
    CHECK_THROWS_WITH_AS(apply_config_file(cfg, unknown),
                         "line 2: unknown key 'bogus'", ConfigError);
    std::istringstream no_eq("tokens 9\n");
    CHECK_THROWS_AS(apply_config_file(cfg, no_eq), ConfigError);
    std::istringstream bad_int("sequences = many\n");
    CHECK_THROWS_AS(apply_config_file(cfg, bad_int), ConfigError);
    std::istringstream bad_method("methods = vuww\n");
    CHECK_THROWS_AS(apply_config_file(cfg, bad_method), ConfigError);
}

TEST_CASE("method and scheme names round-trip") {
    for (Method m : {Method::Basic, Method::VUW, Method::VSpS, Method::MWS, Method::MSE}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    for (Scheme s : {Scheme::DeltaGumbel, Scheme::Gamma}) {
        CHECK(parse_scheme(scheme_name(s)) == s);
    }
    CHECK_THROWS_AS(parse_method("turbo"), ConfigError);
    CHECK_THROWS_AS(parse_scheme("delta"), ConfigError);
}

TEST_CASE("thread budget honours the environment") {
    setenv("SPECWM_THREADS", "3", 1);
    CHECK(thread_budget() == 3);
    setenv("SPECWM_THREADS", "0", 1);
    CHECK(thread_budget() >= 1);
    unsetenv("SPECWM_THREADS");
    CHECK(thread_budget() >= 1);
}
