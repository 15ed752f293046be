#pragma once

// Counter-based random streams.
//
// A stream is keyed by (master seed, tag...) through SplitMix64 mixing; draws
// are a pure function of (key, counter), so a sample's randomness never
// depends on which thread produced it or in which order samples ran.
//
//   key(seed, a, b, ...) = mix(... mix(mix(seed) ^ a) ^ b ...)
//   u64(n)               = mix(key + (n + 1) * 0x9E3779B97F4A7C15)
//
// Normals use the Box-Muller transform on consecutive uniform pairs.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace brownian {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t key = splitmix64(seed);
    for (auto t : tags) key = splitmix64(key ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
    return key;
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}
    CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept
        : key_(derive_seed(seed, tags)) {}

    std::uint64_t next_u64() noexcept {
        ++counter_;
        return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform in the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    double normal(double stddev) noexcept { return stddev * normal(); }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace brownian
