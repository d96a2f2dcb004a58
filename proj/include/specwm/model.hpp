#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "specwm/gen.hpp"

namespace specwm {

// Parameters of one synthetic model pair. The draft is a noisy copy of the
// target: draft row = (1 - draft_epsilon) * target row + draft_epsilon *
// independent simplex draw.
struct ToyModelSpec {
    Vocab n = 64;
    int order = 2;  // how many trailing tokens determine the next distribution
    std::uint64_t seed = 1;
    double temperature = 1.0;   // rows get probabilities proportional to g^(1/T)
    double draft_epsilon = 0.3;
};

// Full-table n-gram model: one TokenDist per context, contexts shorter than
// `order` are left-padded with token 0.
class TableModel final : public LanguageModel {
public:
    TableModel(Vocab n, int order, std::vector<TokenDist> rows);

    Vocab vocab_size() const override { return n_; }
    TokenDist next_dist(std::span<const Token> context) const override;

    int order() const { return order_; }
    const TokenDist& row(std::size_t index) const { return rows_[index]; }
    std::size_t row_count() const { return rows_.size(); }

    // Text format: header "n order", then one comma-separated distribution
    // line per context in lexicographic context order.
    void save(std::ostream& out) const;
    static TableModel load(std::istream& in);

private:
    std::size_t row_index(std::span<const Token> context) const;

    Vocab n_;
    int order_;
    std::vector<TokenDist> rows_;
};

struct ModelPair {
    TableModel target;
    TableModel draft;
};

ModelPair synth_models(const ToyModelSpec& spec);

}  // namespace specwm
