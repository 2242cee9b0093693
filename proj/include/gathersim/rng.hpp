#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "gathersim/rat.hpp"

namespace gathersim {

/// SplitMix64 finaliser; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    return mix64(base ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

/// Counter-style SplitMix64 generator. Cheap to construct, so oblivious
/// schedules can build one per (robot, cycle) query.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Uniform integer in [0, bound) by rejection; portable (unlike
/// std::uniform_int_distribution, whose output is implementation-defined).
template <class Gen>
std::uint64_t uniform_below(Gen& gen, std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = gen();
        if (x < limit) return x % bound;
    }
}

inline constexpr int kUnitBits = 53;

/// k / 2^53 with k uniform in [1, 2^53 - 1]: the open unit interval at 53-bit
/// resolution.
template <class Gen>
Rat uniform_open_unit(Gen& gen) {
    constexpr std::uint64_t span = (std::uint64_t{1} << kUnitBits) - 1;
    const std::uint64_t k = 1 + uniform_below(gen, span);
    return Rat(static_cast<std::int64_t>(k)) * Rat::pow2(-kUnitBits);
}

/// k / 2^53 with k uniform in [0, 2^53].
template <class Gen>
Rat uniform_closed_unit(Gen& gen) {
    constexpr std::uint64_t span = (std::uint64_t{1} << kUnitBits) + 1;
    const std::uint64_t k = uniform_below(gen, span);
    return Rat(static_cast<std::int64_t>(k)) * Rat::pow2(-kUnitBits);
}

/// The per-run random stream handed to lambda policies.
class Rng {
public:
    using result_type = std::uint64_t;
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
    static constexpr result_type max() noexcept { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    std::uint64_t below(std::uint64_t bound) { return uniform_below(*this, bound); }
    bool coin() { return below(2) == 1; }
    Rat open_unit() { return uniform_open_unit(*this); }

private:
    std::mt19937_64 engine_;
};

}  // namespace gathersim
