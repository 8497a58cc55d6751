#pragma once

// Grid checks of the structure equations and of the pointwise identities
// that hold under κ = 0. Each identity is formed symbolically as a residual
// field and then sampled.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acmnp/classify.hpp"

namespace acmnp {

struct IdentityEntry {
    std::string id;
    bool skipped = false;
    std::string skip_reason;
    double max_residual = 0.0;
    Point worst{};
    double tolerance = 0.0;
    bool pass = false;
    // Comparison forms that are expected to fail; excluded from all_pass().
    bool informational = false;
};

struct IdentityResidualReport {
    std::vector<IdentityEntry> entries;
    std::vector<std::string> notes;

    [[nodiscard]] const IdentityEntry* find(std::string_view id) const;
    [[nodiscard]] bool all_pass() const;
    void append(const IdentityResidualReport& other);
};

// Identities are checked at tol · (1 + s)², s the largest coefficient modulus.
double identity_tolerance(const SpinCoefficients& sc, const SampleSet& at, double tol);

// Gauge angle used by verify_all for the covariance entries.
Expr default_gauge_angle();

IdentityResidualReport verify_all(const MetricData& m, const Frame& f, const SpinCoefficients& sc,
                                  const SampleSet& at, double tol = kDefaultTolerance,
                                  const std::optional<Expr>& gauge = std::nullopt);

// Recomputes the spin coefficients in the frame rotated by t and compares
// them, and P/ð/ð̄ of κ, ρ, σ, against the transformation laws.
IdentityResidualReport verify_gauge_covariance(const MetricData& m, const Frame& f, const Expr& t,
                                               const SampleSet& at, double tol = kDefaultTolerance);

struct Box {
    Point lo{};
    Point hi{};
    [[nodiscard]] bool contains(const Point& p) const;
};

struct OrbitSample {
    double t = 0.0;
    Point x{};
    double theta = 0.0;
    double omega = 0.0;
    double ric_xi_xi = 0.0;
    double abs_sigma2 = 0.0;
    double theta_ode = 0.0;
    double omega_ode = 0.0;
};

struct OrbitReport {
    IdentityResidualReport identities;
    std::vector<OrbitSample> samples;
    bool truncated = false;
    std::string warning;
    double cointegration_theta = 0.0;  // max |Θ(x(t)) − Θ_ode(t)|
    double cointegration_omega = 0.0;
};

// Integrates x' = ξ(x) with fixed-step RK4 together with
//   Θ' = −(|σ|² + Θ² − ω² + ½Ric(ξ,ξ)),   ω' = −2Θω,
// seeded from the fields at x0.
OrbitReport raychaudhuri_orbit_check(const MetricData& m, const Frame& f, const SpinCoefficients& sc,
                                     const Point& x0, double t0, double t1, int steps, const Box& box,
                                     const ParamTable& params, double tol = kDefaultTolerance);

}  // namespace acmnp
