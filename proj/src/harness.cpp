#include "specwm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "specwm/prf.hpp"

namespace specwm {

namespace {

struct CellSpec {
    Method method = Method::Basic;
    std::optional<Scheme> reweight;
    int k = 0;
};

std::vector<CellSpec> enumerate_cells(const BenchConfig& cfg) {
    std::vector<CellSpec> cells;
    for (Method m : cfg.methods) {
        switch (m) {
            case Method::Basic:
                cells.push_back({m, std::nullopt, 0});
                break;
            case Method::VUW:
                for (Scheme s : cfg.reweights) {
                    cells.push_back({m, s, 0});
                }
                break;
            case Method::VSpS:
                for (int k : cfg.ks) {
                    cells.push_back({m, std::nullopt, k});
                }
                break;
            case Method::MWS:
            case Method::MSE:
                for (Scheme s : cfg.reweights) {
                    for (int k : cfg.ks) {
                        cells.push_back({m, s, k});
                    }
                }
                break;
        }
    }
    return cells;
}

void push_le64(std::vector<std::uint8_t>& buf, std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
        buf.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
    }
}

// Sequence seeds depend only on (master seed, cell identity, index), never
// on scheduling, so any thread count reproduces the same streams.
std::uint64_t sequence_seed(const BenchConfig& cfg, const CellSpec& cell, int index) {
    std::vector<std::uint8_t> buf{'s', 'e', 'q'};
    push_le64(buf, cfg.master_seed);
    buf.push_back(static_cast<std::uint8_t>(cell.method));
    buf.push_back(cell.reweight ? static_cast<std::uint8_t>(*cell.reweight) : 0xff);
    push_le64(buf, static_cast<std::uint64_t>(cell.k));
    push_le64(buf, static_cast<std::uint64_t>(index));
    const Digest32 d = sha256(buf);
    std::uint64_t seed = 0;
    for (int b = 7; b >= 0; --b) {
        seed = (seed << 8) | d[static_cast<std::size_t>(b)];
    }
    return seed;
}

std::vector<std::uint8_t> bench_key_bytes(const BenchConfig& cfg) {
    if (!cfg.key.empty()) {
        return cfg.key;
    }
    std::vector<std::uint8_t> buf{'b', 'e', 'n', 'c', 'h', '-', 'k', 'e', 'y'};
    push_le64(buf, cfg.master_seed);
    const Digest32 d = sha256(buf);
    return std::vector<std::uint8_t>(d.begin(), d.end());
}

SeqResult run_sequence(const BenchConfig& cfg, const ModelPair& models,
                       const WatermarkKey& key, const CellSpec& cell, int index) {
    Rng rng(sequence_seed(cfg, cell, index));
    std::vector<Token> prompt(static_cast<std::size_t>(models.target.order()));
    for (Token& t : prompt) {
        t = static_cast<Token>(next_below(rng, static_cast<std::uint64_t>(cfg.model.n)));
    }

    SeqResult res;
    std::vector<Token> out;
    int steps = 0;
    const auto t0 = std::chrono::steady_clock::now();
    switch (cell.method) {
        case Method::Basic:
            out = generate_basic(models.target, prompt, cfg.tokens, rng);
            steps = cfg.tokens;
            break;
        case Method::VUW: {
            CodeHistory cch;
            out = generate_vuw(models.target, prompt, cfg.tokens, *cell.reweight, key, cch,
                               cfg.window, rng);
            steps = cfg.tokens;
            break;
        }
        case Method::VSpS: {
            std::vector<Token> ctx = prompt;
            while (static_cast<int>(out.size()) < cfg.tokens) {
                const SpecStep step = generate_vsps(models.target, models.draft, ctx,
                                                    cell.k, rng);
                out.insert(out.end(), step.tokens.begin(), step.tokens.end());
                ctx.insert(ctx.end(), step.tokens.begin(), step.tokens.end());
                ++steps;
            }
            break;
        }
        case Method::MWS:
        case Method::MSE: {
            const Mode mode = cell.method == Method::MWS ? Mode::MWS : Mode::MSE;
            CodeHistory cch;
            std::vector<Token> ctx = prompt;
            while (static_cast<int>(out.size()) < cfg.tokens) {
                const SpecStep step =
                    generate_two_reweight(models.target, models.draft, ctx, cell.k, mode,
                                          *cell.reweight, key, cch, cfg.window, rng);
                out.insert(out.end(), step.tokens.begin(), step.tokens.end());
                ctx.insert(ctx.end(), step.tokens.begin(), step.tokens.end());
                ++steps;
            }
            break;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    res.ptt_ms = std::chrono::duration<double, std::milli>(t1 - t0).count() /
                 static_cast<double>(out.size());
    res.aatps = steps > 0 ? static_cast<double>(out.size()) / static_cast<double>(steps) : 1.0;

    double nll = 0.0;
    std::vector<Token> ctx = prompt;
    for (Token x : out) {
        nll -= std::log(models.target.next_dist(ctx)[x]);
        ctx.push_back(x);
    }
    res.logppl = nll / static_cast<double>(out.size());

    // Unwatermarked methods are scored against a null scheme; their bound
    // should stay at (statistically) zero.
    const Scheme score_scheme = cell.reweight.value_or(Scheme::DeltaGumbel);
    res.anlppt = score_sequence(out, prompt, key, score_scheme, cfg.window, cfg.model.n).anlppt;
    res.tokens = std::move(out);
    return res;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
    const int workers =
        std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::size_t>(
                                               count, 1024))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double parse_double(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("malformed number: '" + s + "'");
}

long long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("malformed integer: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(',', start);
        if (end == std::string::npos) {
            end = s.size();
        }
        std::string part = s.substr(start, end - start);
        const auto a = part.find_first_not_of(" \t");
        const auto b = part.find_last_not_of(" \t");
        if (a != std::string::npos) {
            parts.push_back(part.substr(a, b - a + 1));
        }
        start = end + 1;
    }
    return parts;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::Basic: return "basic";
        case Method::VUW: return "vuw";
        case Method::VSpS: return "vsps";
        case Method::MWS: return "mws";
        case Method::MSE: return "mse";
    }
    return "?";
}

std::string scheme_name(Scheme s) {
    return s == Scheme::DeltaGumbel ? "gumbel" : "gamma";
}

Method parse_method(const std::string& name) {
    if (name == "basic") return Method::Basic;
    if (name == "vuw") return Method::VUW;
    if (name == "vsps") return Method::VSpS;
    if (name == "mws") return Method::MWS;
    if (name == "mse") return Method::MSE;
    throw ConfigError("unknown method '" + name + "'");
}

Scheme parse_scheme(const std::string& name) {
    if (name == "gumbel") return Scheme::DeltaGumbel;
    if (name == "gamma") return Scheme::Gamma;
    throw ConfigError("unknown reweight '" + name + "'");
}

Stat summarize_values(const std::vector<double>& values) {
    Stat st;
    st.count = static_cast<int>(values.size());
    if (values.empty()) {
        return st;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    st.mean = sum / static_cast<double>(st.count);
    if (st.count > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - st.mean) * (v - st.mean);
        }
        st.se = std::sqrt(ss / static_cast<double>(st.count - 1) /
                          static_cast<double>(st.count));
    }
    return st;
}

BenchResult run_benchmark(const BenchConfig& cfg, int threads) {
    if (cfg.methods.empty()) {
        throw ConfigError("no methods selected");
    }
    if (cfg.sequences < 1 || cfg.tokens < 1 || cfg.window < 1) {
        throw ConfigError("sequences, tokens and window must be positive");
    }
    for (int k : cfg.ks) {
        if (k < 1) {
            throw ConfigError("draft lengths must be positive");
        }
    }
    const bool needs_reweight =
        std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
            return m == Method::VUW || m == Method::MWS || m == Method::MSE;
        });
    if (needs_reweight && cfg.reweights.empty()) {
        throw ConfigError("watermarked methods selected but no reweights");
    }

    BenchResult result;
    result.config = cfg;
    const ModelPair models = synth_models(cfg.model);
    const WatermarkKey key(bench_key_bytes(cfg));
    const std::vector<CellSpec> cells = enumerate_cells(cfg);

    result.cells.resize(cells.size());
    std::vector<std::pair<std::size_t, int>> tasks;
    tasks.reserve(cells.size() * static_cast<std::size_t>(cfg.sequences));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        CellResult& cell = result.cells[c];
        cell.method = cells[c].method;
        cell.reweight = cells[c].reweight;
        cell.k = cells[c].k;
        cell.rows.resize(static_cast<std::size_t>(cfg.sequences));
        for (int s = 0; s < cfg.sequences; ++s) {
            tasks.emplace_back(c, s);
        }
    }

    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto [c, s] = tasks[i];
        result.cells[c].rows[static_cast<std::size_t>(s)] =
            run_sequence(cfg, models, key, cells[c], s);
    });

    for (CellResult& cell : result.cells) {
        std::vector<double> aatps, anlppt, logppl, ptt;
        for (const SeqResult& row : cell.rows) {
            aatps.push_back(row.aatps);
            anlppt.push_back(row.anlppt);
            logppl.push_back(row.logppl);
            ptt.push_back(row.ptt_ms);
        }
        cell.aatps = summarize_values(aatps);
        cell.anlppt = summarize_values(anlppt);
        cell.logppl = summarize_values(logppl);
        cell.ptt = summarize_values(ptt);
    }
    return result;
}

const CellResult* find_cell(const BenchResult& r, Method method,
                            std::optional<Scheme> reweight, int k) {
    for (const CellResult& cell : r.cells) {
        if (cell.method == method && cell.reweight == reweight && cell.k == k) {
            return &cell;
        }
    }
    return nullptr;
}

namespace {

std::string cell_prefix(const CellResult& cell) {
    return method_name(cell.method) + ',' +
           (cell.reweight ? scheme_name(*cell.reweight) : "none") + ',' +
           std::to_string(cell.k);
}

std::string num17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_metrics_csv(const BenchResult& r, std::ostream& out) {
    out << "method,reweight,k,metric,mean,stderr,n_sequences\n";
    for (const CellResult& cell : r.cells) {
        const auto line = [&](const char* metric, const Stat& st) {
            out << cell_prefix(cell) << ',' << metric << ',' << num17(st.mean) << ','
                << num17(st.se) << ',' << st.count << '\n';
        };
        line("aatps", cell.aatps);
        line("anlppt_u", cell.anlppt);
        line("logppl", cell.logppl);
        line("ptt_ms", cell.ptt);
    }
}

void write_token_streams(const BenchResult& r, std::ostream& out) {
    for (const CellResult& cell : r.cells) {
        for (std::size_t s = 0; s < cell.rows.size(); ++s) {
            out << cell_prefix(cell) << ',' << s << ':';
            for (Token t : cell.rows[s].tokens) {
                out << ' ' << t;
            }
            out << '\n';
        }
    }
}

std::string summarize(const BenchResult& r) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-6s %-7s %2s  %-17s %-17s %-17s %s\n", "method",
                  "reweight", "k", "aatps", "anlppt_u", "logppl", "ptt_ms");
    out += buf;
    for (const CellResult& cell : r.cells) {
        const auto col = [](const Stat& st) {
            char c[40];
            std::snprintf(c, sizeof(c), "%.4f +- %.4f", st.mean, st.se);
            return std::string(c);
        };
        std::snprintf(buf, sizeof(buf), "%-6s %-7s %2d  %-17s %-17s %-17s %.4f\n",
                      method_name(cell.method).c_str(),
                      cell.reweight ? scheme_name(*cell.reweight).c_str() : "none", cell.k,
                      col(cell.aatps).c_str(), col(cell.anlppt).c_str(),
                      col(cell.logppl).c_str(), cell.ptt.mean);
        out += buf;
    }
    return out;
}

void apply_config_file(BenchConfig& cfg, std::istream& in) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto x = s.find_first_not_of(" \t\r");
            if (x == std::string::npos) {
                return std::string();
            }
            const auto y = s.find_last_not_of(" \t\r");
            return s.substr(x, y - x + 1);
        };
        const std::string k = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (k == "methods") {
            cfg.methods.clear();
            for (const auto& part : split_list(v)) {
                cfg.methods.push_back(parse_method(part));
            }
        } else if (k == "reweights") {
            cfg.reweights.clear();
            for (const auto& part : split_list(v)) {
                cfg.reweights.push_back(parse_scheme(part));
            }
        } else if (k == "k") {
            cfg.ks.clear();
            for (const auto& part : split_list(v)) {
                cfg.ks.push_back(static_cast<int>(parse_int(part)));
            }
        } else if (k == "sequences") {
            cfg.sequences = static_cast<int>(parse_int(v));
        } else if (k == "tokens") {
            cfg.tokens = static_cast<int>(parse_int(v));
        } else if (k == "n") {
            cfg.model.n = static_cast<Vocab>(parse_int(v));
        } else if (k == "order") {
            cfg.model.order = static_cast<int>(parse_int(v));
        } else if (k == "temperature") {
            cfg.model.temperature = parse_double(v);
        } else if (k == "epsilon") {
            cfg.model.draft_epsilon = parse_double(v);
        } else if (k == "model_seed") {
            cfg.model.seed = static_cast<std::uint64_t>(parse_int(v));
        } else if (k == "window") {
            cfg.window = static_cast<int>(parse_int(v));
        } else if (k == "seed") {
            cfg.master_seed = static_cast<std::uint64_t>(parse_int(v));
        } else if (k == "key") {
            cfg.key = parse_hex(v);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + k + "'");
        }
    }
}

int thread_budget() {
    if (const char* env = std::getenv("SPECWM_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) {
            return v;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace specwm
