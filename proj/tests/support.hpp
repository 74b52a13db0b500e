#pragma once

#include "critlog/energy.hpp"
#include "critlog/grid.hpp"

#include <cmath>
#include <random>

namespace critlog::test {

inline real rel_err(real a, real b) { return std::fabs(a - b) / std::fabs(b); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline real uniform(real a, real b) {
    std::uniform_real_distribution<double> d(static_cast<double>(a), static_cast<double>(b));
    return d(rng());
}

/// Smooth positive radial profile: a random combination of (1 - (r/R)^2)^k
/// and a resolved Gaussian bump.
inline GridFunction random_profile(const RadialGrid& g) {
    const real a1 = uniform(0.2L, 2), a2 = uniform(0.0L, 2), a3 = uniform(0.0L, 1);
    const real width = uniform(0.15L, 0.4L) * g.radius();
    return g.sample([&](real r) {
        const real s = 1 - (r / g.radius()) * (r / g.radius());
        return a1 * s + a2 * s * s * s + a3 * s * std::exp(-(r * r) / (width * width));
    });
}

/// Random direction with the same smoothness, possibly sign-changing.
inline GridFunction random_direction(const RadialGrid& g) {
    const real b1 = uniform(-1, 1), b2 = uniform(-1, 1), b3 = uniform(-1, 1);
    return g.sample([&](real r) {
        const real x = r / g.radius();
        return b1 * (1 - x * x) + b2 * std::cos(3 * x) * (1 - x) + b3 * x * (1 - x);
    });
}

}  // namespace critlog::test
