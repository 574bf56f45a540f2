#pragma once

#include <array>
#include <cstdint>

namespace metro {

// Philox4x64-10 counter-based generator (Salmon et al., Random123).
// Pure function of (counter, key): streams never carry state, so draws
// indexed by (seed, trial, shot) are reproducible and order-independent.
namespace philox {

inline constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

using Counter = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

namespace detail {

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

inline Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        detail::mulhilo(kMult0, ctr[0], hi0, lo0);
        detail::mulhilo(kMult1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

inline double to_unit(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

}  // namespace philox

// Stream purposes keep independent uses of the same seed decorrelated.
enum class RngStream : std::uint64_t { Sampling = 0, Bootstrap = 1 };

inline double counter_uniform(std::uint64_t seed, RngStream stream, std::uint64_t trial,
                              std::uint64_t draw) {
    const philox::Counter out = philox::block(
        {draw >> 2, trial, static_cast<std::uint64_t>(stream), 0}, {seed, 0x6D6574726F6C6162ULL});
    return philox::to_unit(out[draw & 3]);
}

}  // namespace metro
