#include "specwm/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace specwm {

namespace {

std::size_t table_size(Vocab n, int order) {
    std::size_t size = 1;
    for (int k = 0; k < order; ++k) {
        const std::size_t next = size * static_cast<std::size_t>(n);
        if (next / static_cast<std::size_t>(n) != size || next > (1u << 26)) {
            throw ConfigError("model table too large: " + std::to_string(n) + "^" +
                              std::to_string(order) + " contexts");
        }
        size = next;
    }
    return size;
}

}  // namespace

TableModel::TableModel(Vocab n, int order, std::vector<TokenDist> rows)
    : n_(n), order_(order), rows_(std::move(rows)) {
    if (n < 2) {
        throw ConfigError("vocabulary must have at least two tokens");
    }
    if (order < 1) {
        throw ConfigError("model order must be at least 1");
    }
    if (rows_.size() != table_size(n, order)) {
        throw InputError("model has " + std::to_string(rows_.size()) + " rows, expected " +
                         std::to_string(table_size(n, order)));
    }
    for (const TokenDist& r : rows_) {
        if (r.size() != n_) {
            throw DimensionError("model row length does not match vocabulary");
        }
    }
}

std::size_t TableModel::row_index(std::span<const Token> context) const {
    // last `order_` tokens, most significant first; missing ones act as 0
    std::size_t index = 0;
    const std::size_t have = std::min(context.size(), static_cast<std::size_t>(order_));
    const std::size_t pad = static_cast<std::size_t>(order_) - have;
    for (std::size_t k = 0; k < pad; ++k) {
        index *= static_cast<std::size_t>(n_);
    }
    for (std::size_t k = context.size() - have; k < context.size(); ++k) {
        const Token t = context[k];
        if (t < 0 || t >= n_) {
            throw InputError("context token outside vocabulary");
        }
        index = index * static_cast<std::size_t>(n_) + static_cast<std::size_t>(t);
    }
    return index;
}

TokenDist TableModel::next_dist(std::span<const Token> context) const {
    return rows_[row_index(context)];
}

void TableModel::save(std::ostream& out) const {
    out << n_ << ' ' << order_ << '\n';
    for (const TokenDist& r : rows_) {
        out << format_dist(r) << '\n';
    }
}

TableModel TableModel::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw InputError("empty model file");
    }
    std::istringstream hs(header);
    long long n = 0;
    int order = 0;
    if (!(hs >> n >> order) || n < 2 || order < 1) {
        throw InputError("malformed model header: '" + header + "'");
    }
    const std::size_t want = table_size(static_cast<Vocab>(n), order);
    std::vector<TokenDist> rows;
    rows.reserve(want);
    std::string line;
    while (rows.size() < want && std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        rows.push_back(parse_dist(line));
    }
    if (rows.size() != want) {
        throw InputError("model file ended after " + std::to_string(rows.size()) + " of " +
                         std::to_string(want) + " rows");
    }
    return TableModel(static_cast<Vocab>(n), order, std::move(rows));
}

ModelPair synth_models(const ToyModelSpec& spec) {
    if (!(spec.temperature > 0.0)) {
        throw ConfigError("temperature must be positive");
    }
    if (spec.draft_epsilon < 0.0 || spec.draft_epsilon > 1.0) {
        throw ConfigError("draft_epsilon must lie in [0, 1]");
    }
    const std::size_t n_rows = table_size(spec.n, spec.order);
    const std::size_t n = static_cast<std::size_t>(spec.n);
    Rng rng(mix64(spec.seed));

    std::vector<TokenDist> target_rows;
    std::vector<TokenDist> draft_rows;
    target_rows.reserve(n_rows);
    draft_rows.reserve(n_rows);
    std::vector<double> w(n);
    std::vector<double> mixed(n);
    for (std::size_t r = 0; r < n_rows; ++r) {
        const TokenDist g = random_dirichlet(spec.n, rng);
        // sharpen in log space so tiny temperatures cannot overflow
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::log(std::max(g[static_cast<Vocab>(i)], 1e-300)) / spec.temperature;
            top = std::max(top, w[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::exp(w[i] - top);
        }
        target_rows.push_back(make_dist(w));

        const TokenDist noise = random_dirichlet(spec.n, rng);
        for (std::size_t i = 0; i < n; ++i) {
            mixed[i] = (1.0 - spec.draft_epsilon) * target_rows.back()[static_cast<Vocab>(i)] +
                       spec.draft_epsilon * noise[static_cast<Vocab>(i)];
        }
        draft_rows.push_back(make_dist(mixed));
    }
    return ModelPair{TableModel(spec.n, spec.order, std::move(target_rows)),
                     TableModel(spec.n, spec.order, std::move(draft_rows))};
}

}  // namespace specwm
