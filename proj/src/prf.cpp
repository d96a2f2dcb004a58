#include "specwm/prf.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "specwm/errors.hpp"

namespace specwm {

Digest32 sha256(std::span<const std::uint8_t> data) {
    // One context per thread; EVP_DigestInit_ex resets it between calls.
    thread_local EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    Digest32 out{};
    unsigned int len = 0;
    if (ctx == nullptr ||
        EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
        throw InternalInvariantError("SHA-256 computation failed");
    }
    return out;
}

CounterStream::CounterStream(const Digest32& seed) {
    std::memcpy(block_input_.data(), seed.data(), seed.size());
    std::memset(block_input_.data() + 32, 0, 8);
}

void CounterStream::refill() {
    for (int b = 0; b < 8; ++b) {
        block_input_[32 + b] = static_cast<std::uint8_t>(counter_ >> (8 * b));
    }
    ++counter_;
    const Digest32 block = sha256(block_input_);
    for (int w = 0; w < 4; ++w) {
        std::uint64_t x = 0;
        for (int b = 7; b >= 0; --b) {
            x = (x << 8) | block[static_cast<std::size_t>(8 * w + b)];
        }
        words_[static_cast<std::size_t>(w)] = x;
    }
    pos_ = 0;
}

std::uint64_t CounterStream::operator()() {
    if (pos_ == 4) {
        refill();
    }
    return words_[static_cast<std::size_t>(pos_++)];
}

std::vector<std::uint8_t> parse_hex(const std::string& s) {
    auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw InputError("invalid hex character in '" + s + "'");
    };
    if (s.size() % 2 != 0) {
        throw InputError("hex string has odd length");
    }
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
    }
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

}  // namespace specwm
