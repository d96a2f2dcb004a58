#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "specwm/dist.hpp"

namespace specwm {

// 16-byte digest of the recent context window plus a salt. Equality of codes
// is what the skip rule and detection dedup key on.
struct ContextCode {
    std::array<std::uint8_t, 16> digest{};

    bool operator==(const ContextCode&) const = default;
};

// Digest of the last min(m, len) tokens of `tokens` together with `salt`.
// m >= 1.
ContextCode context_code(std::span<const Token> tokens, int m,
                         std::span<const std::uint8_t> salt);

// Insertion-ordered set of context codes. Inserting an existing code is a
// no-op, so membership semantics match list semantics with dedup.
class CodeHistory {
public:
    bool contains(const ContextCode& c) const { return seen_.count(c) != 0; }

    void insert(const ContextCode& c) {
        if (seen_.insert(c).second) {
            order_.push_back(c);
        }
    }

    std::size_t size() const { return order_.size(); }
    const std::vector<ContextCode>& entries() const { return order_; }

private:
    struct Hash {
        std::size_t operator()(const ContextCode& c) const {
            std::size_t h = 0;
            for (int b = 0; b < 8; ++b) {
                h = (h << 8) | c.digest[static_cast<std::size_t>(b)];
            }
            return h;  // digest bytes are already uniform
        }
    };

    std::vector<ContextCode> order_;
    std::unordered_set<ContextCode, Hash> seen_;
};

}  // namespace specwm
