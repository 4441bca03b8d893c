#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace clubsim {

/// Named sub-streams of an episode's master seed.
enum class Stream : std::uint32_t {
    scenario = 1,
    policy_map = 2,
    agent = 3,
};

/// Deterministic 64-bit seed for (master, stream, index).
inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint32_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), index};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::mt19937_64 make_stream(std::uint64_t master, Stream stream, std::uint32_t index = 0) {
    return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace clubsim
