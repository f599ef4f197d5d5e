#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ostat {

// Identifies one reproducible random stream: the stream is a pure function
// of (master_seed, trial_index), so trial k draws the same numbers whether
// trials run serially or on any number of workers.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

namespace detail {

// SplitMix64 finalizer (Stafford mix13). Used for key derivation only.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// xoshiro256++ with all state derived from a SeedSpec via SplitMix64.
// Fully specified 64-bit integer arithmetic: sequences are identical on
// every platform and compiler.
class RandomStream {
public:
    explicit RandomStream(SeedSpec spec) {
        std::uint64_t key = detail::mix64(spec.master_seed);
        key = detail::mix64(key ^ (spec.trial_index + 0xd1b54a32d192ed03ULL));
        std::uint64_t sm = key;
        for (auto& s : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            s = detail::mix64(sm);
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1): 53-bit mantissa, offset by half an
    // ulp so 0 and 1 are unreachable.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard exponential by inversion, -log(1-u). Strictly positive.
    double next_exponential() {
        return -std::log1p(-next_uniform());
    }

private:
    std::array<std::uint64_t, 4> state_{};
};

} // namespace ostat
