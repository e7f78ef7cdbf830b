#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fdstab {

/// Reproducible stream: the state depends only on (seed, stream), so parallel
/// workers that take stream = task index produce the same numbers regardless
/// of scheduling.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1). Converted by hand so the result does not depend on
    /// the standard library's distribution implementation.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (double& x : v) {
            x = uniform(lo, hi);
        }
        return v;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace fdstab
