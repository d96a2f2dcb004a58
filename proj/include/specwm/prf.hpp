#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specwm {

using Digest32 = std::array<std::uint8_t, 32>;

Digest32 sha256(std::span<const std::uint8_t> data);

// Deterministic word stream: block_j = SHA-256(seed || j_le64), consumed as
// four little-endian 64-bit words per block. Replayable on any platform;
// used for watermark code derivation, never for simulation randomness.
class CounterStream {
public:
    using result_type = std::uint64_t;

    explicit CounterStream(const Digest32& seed);

    std::uint64_t operator()();

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~0ull; }

private:
    void refill();

    std::array<std::uint8_t, 40> block_input_;  // seed(32) || counter(8)
    std::array<std::uint64_t, 4> words_{};
    std::uint64_t counter_ = 0;
    int pos_ = 4;
};

std::vector<std::uint8_t> parse_hex(const std::string& s);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace specwm
