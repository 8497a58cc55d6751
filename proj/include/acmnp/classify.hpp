#pragma once

// Classification of an almost contact metric structure from its spin
// coefficients. Every statement is about the sampled points only.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acmnp/np.hpp"

namespace acmnp {

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kIndeterminateShear = 1e-6;

class GateError : public std::runtime_error {
public:
    GateError(std::string gate, const std::string& message) : std::runtime_error(message), gate_(std::move(gate)) {}
    [[nodiscard]] const std::string& gate() const { return gate_; }

private:
    std::string gate_;
};

struct FlagRecord {
    std::string name;
    bool holds = false;
    double max_violation = 0.0;
    Point witness{};
};

struct ClassificationReport {
    std::vector<FlagRecord> flags;
    double tolerance = 0.0;  // effective, after scaling
    double coefficient_scale = 0.0;
    int orientation = 1;
    std::vector<int> rank;
    std::optional<int> uniform_rank;
    bool rank2_on_normal = false;
    // Sampled fields; alpha = ω and beta_s = Θ are meaningful when normal.
    std::vector<double> theta;
    std::vector<double> omega;
    std::vector<double> abs_sigma;
    std::vector<double> abs_kappa;

    [[nodiscard]] const FlagRecord& flag(std::string_view name) const;
    [[nodiscard]] bool holds(std::string_view name) const { return flag(name).holds; }
};

// Pairs "a => b" whose implication fails in the report; empty when the
// lattice sasakian ⇒ alpha_sasakian ⇒ normal, kenmotsu ⇒ beta_kenmotsu ⇒ normal,
// contact_metric ⇒ geodesic, killing ⇒ geodesic, cosymplectic ⇒ normal holds.
std::vector<std::string> implication_violations(const ClassificationReport& r);

// tol · (1 + max over the grid of the five coefficient moduli).
double effective_tolerance(const SpinCoefficients& sc, const SampleSet& at, double tol);

ClassificationReport classify_structure(const SpinCoefficients& sc, const AcmStructure& acm, const SampleSet& at,
                                        double tol = kDefaultTolerance);

struct ConstancyStats {
    bool constant = false;
    std::complex<double> mean;
    double max_deviation = 0.0;
};

// Constant iff max |f − mean| ≤ tol · (1 + |mean|). Entries that are NaN are ignored.
ConstancyStats constancy_check(const Samples& values, double tol);
ConstancyStats constancy_check(const ComplexField& field, const SampleSet& at, double tol);

struct EtaEinsteinReport {
    // residual1 = P(σ) + 2Θσ = Ric(∂,∂), residual2 = ∂ρ + ð̄σ = −Ric(ξ,∂) when κ = 0.
    double residual1 = 0.0;
    double residual2 = 0.0;
    Point worst1{};
    Point worst2{};
    // P(σ) − 2Θσ, the sign choice that does not match Ric(∂,∂); informational.
    double residual1_variant = 0.0;
    bool eta_einstein = false;
    double tolerance = 0.0;
    std::vector<double> a;  // Ric(∂,∂̄)
    std::vector<double> b;  // Ric(ξ,ξ) − Ric(∂,∂̄)
    ConstancyStats a_stats;
    ConstancyStats b_stats;
    double cross_check = 0.0;  // max frame component of Ric − a g − b η⊗η
};

// Throws GateError("geodesic") when κ ≠ 0.
EtaEinsteinReport eta_einstein_test(const SpinCoefficients& sc, const MetricData& m, const Frame& f,
                                    const SampleSet& at, double tol = kDefaultTolerance);

struct KMuNuReport {
    std::vector<double> k;   // 1 − |σ|²
    std::vector<double> mu;  // NaN where |σ| < kIndeterminateShear
    std::vector<double> nu;
    std::size_t indeterminate_points = 0;
    double residual_theta = 0.0;         // max |Θ|
    double residual_eth_bar_sigma = 0.0; // max |ð̄σ|
    double residual_k = 0.0;             // max |Ric(ξ,ξ) − 2k|
    double residual_ricci_xi_del = 0.0;  // max |Ric(ξ,∂)|
    double consistency = 0.0;            // max |P(σ) − σ(iμ̄ − ν̄)| with grid means μ̄, ν̄
    double residual_ricci_del_del = 0.0; // max |Ric(∂,∂) − (iμ̄ − ν̄)σ|
    ConstancyStats k_stats;
    ConstancyStats mu_stats;
    ConstancyStats nu_stats;
    ConstancyStats abs_sigma_stats;
    bool is_kmunu = false;
    bool is_k00 = false;
    double tolerance = 0.0;
};

// Throws GateError("contact_metric") unless κ = 0 and ω = 1.
KMuNuReport kmunu_extract(const SpinCoefficients& sc, const MetricData& m, const Frame& f, const SampleSet& at,
                          double tol = kDefaultTolerance);

// Normal η-Einstein structures on a compact manifold are α-Sasakian with
// constant ω or β-Kenmotsu with ∂Θ = 0; this checks which branch a sampled
// structure falls in.
struct DichotomyReport {
    bool applicable = false;
    std::string reason;
    bool alpha_sasakian_constant_twist = false;
    bool beta_kenmotsu_horizontal_expansion = false;
    bool escapes = false;
    double omega_deviation = 0.0;
    double max_del_theta = 0.0;
    std::string note;
};

DichotomyReport compact_dichotomy(const ClassificationReport& cls, const std::optional<EtaEinsteinReport>& ee,
                                  const SpinCoefficients& sc, const Frame& f, const SampleSet& at);

}  // namespace acmnp
