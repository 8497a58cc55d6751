#include "acmnp/random_structure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace acmnp {

namespace {

// Sum of a constant and three modes c·cos(k·x) + d·sin(k·x) with integer
// wave vectors in {−2..2}³; coefficients rescaled so |S| ≤ 1 everywhere.
// `axes` masks which coordinates may appear.
Expr trig_poly(std::mt19937_64& rng, std::array<bool, 3> axes = {true, true, true})
{
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);
    double c0 = coeff(rng);
    double total = std::abs(c0);
    struct Mode {
        std::array<int, 3> k;
        double c;
        double d;
    };
    std::array<Mode, 3> modes;
    for (auto& m : modes) {
        bool nonzero = false;
        while (!nonzero) {
            for (int i = 0; i < 3; ++i) {
                m.k[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)] ? wave(rng) : 0;
                nonzero = nonzero || m.k[static_cast<std::size_t>(i)] != 0;
            }
        }
        m.c = coeff(rng);
        m.d = coeff(rng);
        total += std::abs(m.c) + std::abs(m.d);
    }
    const double norm = total > 0.0 ? 1.0 / total : 0.0;
    Expr out(c0 * norm);
    for (const auto& m : modes) {
        Expr phase(0.0);
        for (int i = 0; i < 3; ++i) {
            const int k = m.k[static_cast<std::size_t>(i)];
            if (k != 0) phase += Expr(static_cast<double>(k)) * Expr::coordinate(i);
        }
        out += Expr(m.c * norm) * cos(phase) + Expr(m.d * norm) * sin(phase);
    }
    return out;
}

std::uint64_t mix(std::uint64_t seed, int attempt)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStructure random_structure(std::uint64_t seed, const RandomOptions& opt)
{
    if (!(opt.amplitude > 0.0 && opt.amplitude <= 0.3)) {
        throw std::invalid_argument("amplitude must lie in (0, 0.3]");
    }
    const Expr A(opt.amplitude);
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::mt19937_64 rng(mix(seed, attempt));
        RandomStructure r;
        r.seed = seed;
        r.attempts = attempt + 1;
        auto& c = r.components;
        if (opt.family == RandomFamily::General) {
            // Order g11 g12 g13 g22 g23 g33.
            for (int k = 0; k < 6; ++k) {
                const bool diagonal = k == 0 || k == 3 || k == 5;
                c[static_cast<std::size_t>(k)] = (diagonal ? Expr(1.0) : Expr(0.0)) + A * trig_poly(rng);
            }
            const Expr s1 = A * trig_poly(rng);
            const Expr s2 = A * trig_poly(rng);
            const Expr s3 = A * trig_poly(rng);
            r.xi_raw = {s1, s2, Expr(1.0) + s3};
        } else {
            c[0] = Expr(1.0) + A * trig_poly(rng);
            c[1] = A * trig_poly(rng);
            c[3] = Expr(1.0) + A * trig_poly(rng);
            c[2] = A * trig_poly(rng, {true, true, false});
            c[4] = A * trig_poly(rng, {true, true, false});
            c[5] = Expr(1.0);
            r.xi_raw = {Expr(0.0), Expr(0.0), Expr(1.0)};
        }

        r.s.at.points = lattice(opt.domain, opt.grid);
        r.s.metric = build_metric(c);
        try {
            check_positive_definite(r.s.metric, r.s.at);
        } catch (const MetricError&) {
            continue;
        }
        r.s.frame = build_frame(r.s.metric, ReebSpec{ReebSpec::Kind::Xi, r.xi_raw}, 1, r.s.at, {0.0, 0.0, 0.0});
        r.s.spin = spin_coefficients(r.s.metric, r.s.frame);
        r.s.acm = make_acm(r.s.metric, r.s.frame);
        return r;
    }
    throw std::runtime_error("random_structure: no positive-definite metric after 8 attempts (seed " +
                             std::to_string(seed) + ")");
}

Expr random_gauge_angle(std::uint64_t seed, double scale)
{
    std::mt19937_64 rng(mix(seed, -1) ^ 0x5DEECE66DULL);
    return Expr(scale) * trig_poly(rng);
}

}  // namespace acmnp
