#include "specwm/context.hpp"

#include <cstring>

#include "specwm/errors.hpp"
#include "specwm/prf.hpp"

namespace specwm {

ContextCode context_code(std::span<const Token> tokens, int m,
                         std::span<const std::uint8_t> salt) {
    if (m < 1) {
        throw ConfigError("context window must be at least 1 token");
    }
    const std::size_t take = std::min(tokens.size(), static_cast<std::size_t>(m));
    const std::span<const Token> window = tokens.subspan(tokens.size() - take);

    // count(le32) || tokens(le32 each) || salt; the count prefix keeps short
    // windows at the sequence start unambiguous.
    std::vector<std::uint8_t> buf;
    buf.reserve(4 + 4 * take + salt.size());
    auto push_le32 = [&buf](std::uint32_t x) {
        for (int b = 0; b < 4; ++b) {
            buf.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
        }
    };
    push_le32(static_cast<std::uint32_t>(take));
    for (Token t : window) {
        push_le32(static_cast<std::uint32_t>(t));
    }
    buf.insert(buf.end(), salt.begin(), salt.end());

    const Digest32 full = sha256(buf);
    ContextCode code;
    std::memcpy(code.digest.data(), full.data(), code.digest.size());
    return code;
}

}  // namespace specwm
