// rng.hpp — Seedable, splittable random stream.
//
// mt19937_64 seeded through splitmix64; uniform doubles are formed from the
// top 53 bits so a given seed yields the same stream on every platform.

#pragma once

#include <cstdint>
#include <random>

namespace pulsemix {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed of the independent sub-stream `stream` derived from `seed`
inline constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // independent of how far this stream has advanced
    Rng split(std::uint64_t stream) const { return Rng(split_seed(seed_, stream)); }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace pulsemix
