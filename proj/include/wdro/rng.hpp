#pragma once

#include <cmath>
#include <cstdint>

namespace wdro {

// Deterministic 64-bit generator (splitmix64). Every run owns a single root
// seed; subsystems derive independent substreams with substream(), so results
// are reproducible bit-for-bit regardless of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Standard normal via Box-Muller (one value per call, second discarded;
    // simplicity over throughput).
    double next_gaussian() {
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Substream derivation: the subsystem index is folded into the seed
    // before remixing. Trial i of a Monte Carlo run uses substream(seed, i).
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
        Rng g(seed + index);
        return g.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace wdro
