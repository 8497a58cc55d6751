#pragma once

// Seeded random metrics and Reeb fields for the property tests.

#include <cstdint>

#include "acmnp/manifest.hpp"

namespace acmnp {

enum class RandomFamily {
    General,   // g = I + A·S(x), ξ = normalize(s1, s2, 1 + s3)
    Geodesic,  // g_zz = 1, g_xz and g_yz independent of z, ξ = ∂_z; forces κ = 0
};

struct RandomOptions {
    double amplitude = 0.1;
    RandomFamily family = RandomFamily::General;
    int grid = 5;
    Box domain{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
};

struct RandomStructure {
    std::uint64_t seed = 0;
    int attempts = 0;
    std::array<Expr, 6> components;
    RealVector xi_raw;
    Structure s;
};

// Throws std::invalid_argument unless amplitude ∈ (0, 0.3], and
// std::runtime_error if 8 attempts fail the positive-definiteness check.
RandomStructure random_structure(std::uint64_t seed, const RandomOptions& opt = {});

// Non-constant gauge angle: a seeded degree-≤2 trigonometric polynomial
// with coefficients bounded by `scale`.
Expr random_gauge_angle(std::uint64_t seed, double scale = 0.5);

}  // namespace acmnp
