#pragma once

#include <cstdint>
#include <cmath>

#include "qkahler/common.hpp"

namespace qk {

/// Counter-based generator: draw i is a pure function of (seed, stream, i),
/// so every randomized suite is reproducible from a single 64-bit seed and
/// its documented draw order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1))) {}

    std::uint64_t next_u64() {
        // splitmix64 on an incrementing counter
        std::uint64_t z = base_ + 0x9E3779B97F4A7C15ull * (++counter_);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Uniform on the complex disc of the given radius (polar draw: radius then angle).
    cplx complex_in_disc(double radius) {
        double r = radius * std::sqrt(uniform());
        double th = 2.0 * 3.14159265358979323846 * uniform();
        return cplx(r * std::cos(th), r * std::sin(th));
    }

    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace qk
