#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace relsys {

// xoshiro256** with streams derived from (seed, stream index) via splitmix64.
// Replication r of a simulation uses Rng::stream(seed, r), so results do not
// depend on how replications are scheduled across threads.
class Rng {
public:
    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += golden_gamma);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed + index * golden_gamma;
        Rng r;
        r.s_[0] = splitmix64(s);
        r.s_[1] = splitmix64(s);
        r.s_[2] = splitmix64(s);
        r.s_[3] = splitmix64(s);
        if ((r.s_[0] | r.s_[1] | r.s_[2] | r.s_[3]) == 0) r.s_[0] = golden_gamma;
        return r;
    }

    static Rng from_seed(std::uint64_t seed) { return stream(seed, 0); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); safe to pass to log().
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_unit()); }

private:
    Rng() = default;

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace relsys
