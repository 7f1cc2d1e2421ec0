#pragma once

#include <cstdint>
#include <random>

namespace netrecon {

/// Seeded generator with a platform-independent uniform mapping.
/// std::mt19937_64 output is pinned by the standard; the [0,1) mapping below
/// uses the top 53 bits, so identical seeds give identical doubles everywhere.
/// (std::uniform_real_distribution is implementation-defined and would not.)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Uniform in (0, 1); rejects the (measure-zero) exact 0.
    double positive_unit() {
        double u = unit();
        while (u == 0.0) u = unit();
        return u;
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace netrecon
