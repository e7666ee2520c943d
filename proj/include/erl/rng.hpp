#pragma once

#include <cmath>
#include <cstdint>

namespace erl {

// Counter-based random number generator. Every draw is a pure function of
// (seed, stream, counter), so parallel workers can take disjoint streams and
// still reproduce a single-threaded run bit for bit. Streams are cheap:
// conventionally one per sample point.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : base_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ stream)) {}

    /// Uniform double in the open interval (0,1).
    double uniform(std::uint64_t counter) const noexcept {
        const std::uint64_t bits = mix(base_ ^ mix(counter + 0x632be59bd9b4e019ULL));
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw, Box-Muller over uniform counters 2i and 2i+1.
    double normal(std::uint64_t counter) const noexcept {
        const std::uint64_t pair = counter >> 1;
        const double u1 = uniform(2 * pair);
        const double u2 = uniform(2 * pair + 1);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        return (counter & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) noexcept {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t base_;
};

}  // namespace erl
