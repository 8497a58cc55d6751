#include "acmnp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acmnp {

namespace {

struct Violation {
    double value = 0.0;
    std::size_t index = 0;
};

Violation worst_of(std::initializer_list<const std::vector<double>*> parts)
{
    Violation v;
    for (const auto* p : parts) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            if (!((*p)[i] <= v.value)) {
                v = {(*p)[i], i};
            }
        }
    }
    return v;
}

std::vector<double> abs_of(const Samples& s)
{
    std::vector<double> out(s.size());
    std::transform(s.begin(), s.end(), out.begin(), [](std::complex<double> z) { return std::abs(z); });
    return out;
}

std::vector<double> abs_shifted(const std::vector<double>& v, double shift)
{
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return std::abs(x - shift); });
    return out;
}

void require_points(const SampleSet& at)
{
    if (at.points.empty()) {
        throw std::invalid_argument("empty sample grid");
    }
}

}  // namespace

const FlagRecord& ClassificationReport::flag(std::string_view name) const
{
    for (const auto& f : flags) {
        if (f.name == name) {
            return f;
        }
    }
    throw std::out_of_range("unknown flag " + std::string(name));
}

double effective_tolerance(const SpinCoefficients& sc, const SampleSet& at, double tol)
{
    const std::array<ComplexField, 5> all{sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta};
    double scale = 0.0;
    for (const auto& s : sample(all, at)) {
        scale = std::max(scale, max_abs(s).value);
    }
    return tol * (1.0 + scale);
}

ClassificationReport classify_structure(const SpinCoefficients& sc, const AcmStructure& acm, const SampleSet& at,
                                        double tol)
{
    require_points(at);
    const std::array<ComplexField, 5> all{sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta};
    const auto s = sample(all, at);

    ClassificationReport r;
    for (const auto& v : s) {
        r.coefficient_scale = std::max(r.coefficient_scale, max_abs(v).value);
    }
    r.tolerance = tol * (1.0 + r.coefficient_scale);
    r.orientation = acm.frame.orientation;

    const auto kappa = abs_of(s[0]);
    const auto sigma = abs_of(s[2]);
    const auto rho = abs_of(s[1]);
    for (const auto& z : s[1]) {
        r.theta.push_back(z.real());
        r.omega.push_back(z.imag());
    }
    r.abs_sigma = sigma;
    r.abs_kappa = kappa;
    const auto theta = abs_shifted(r.theta, 0.0);
    const auto theta_m1 = abs_shifted(r.theta, 1.0);
    const auto omega = abs_shifted(r.omega, 0.0);
    const auto omega_m1 = abs_shifted(r.omega, 1.0);

    const auto add = [&](std::string name, std::initializer_list<const std::vector<double>*> parts) {
        const Violation v = worst_of(parts);
        r.flags.push_back({std::move(name), v.value <= r.tolerance, v.value, at.points[v.index]});
    };
    add("geodesic", {&kappa});
    add("shear_free", {&sigma});
    add("killing", {&kappa, &sigma, &theta});
    add("normal", {&kappa, &sigma});
    add("trans_sasakian", {&kappa, &sigma});
    add("contact_metric", {&kappa, &omega_m1});
    add("alpha_sasakian", {&kappa, &sigma, &theta});
    add("sasakian", {&kappa, &sigma, &theta, &omega_m1});
    add("beta_kenmotsu", {&kappa, &sigma, &omega});
    add("kenmotsu", {&kappa, &sigma, &omega, &theta_m1});
    add("cosymplectic", {&kappa, &sigma, &rho});

    const FormsReport forms = fundamental_forms(acm, at, r.tolerance);
    r.rank = forms.rank;
    r.uniform_rank = forms.uniform;
    r.rank2_on_normal = r.holds("normal") && std::find(r.rank.begin(), r.rank.end(), 2) != r.rank.end();
    return r;
}

std::vector<std::string> implication_violations(const ClassificationReport& r)
{
    static const std::array<std::pair<const char*, const char*>, 9> rules{{
        {"sasakian", "alpha_sasakian"},
        {"alpha_sasakian", "normal"},
        {"kenmotsu", "beta_kenmotsu"},
        {"beta_kenmotsu", "normal"},
        {"cosymplectic", "normal"},
        {"contact_metric", "geodesic"},
        {"killing", "geodesic"},
        {"normal", "geodesic"},
        {"normal", "shear_free"},
    }};
    std::vector<std::string> out;
    for (const auto& [a, b] : rules) {
        if (r.holds(a) && !r.holds(b)) {
            out.push_back(std::string(a) + " => " + b);
        }
    }
    return out;
}

ConstancyStats constancy_check(const Samples& values, double tol)
{
    ConstancyStats c;
    std::complex<double> sum;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (std::isnan(v.real()) || std::isnan(v.imag())) {
            continue;
        }
        sum += v;
        ++n;
    }
    if (n == 0) {
        c.constant = true;
        return c;
    }
    c.mean = sum / static_cast<double>(n);
    for (const auto& v : values) {
        if (std::isnan(v.real()) || std::isnan(v.imag())) {
            continue;
        }
        c.max_deviation = std::max(c.max_deviation, std::abs(v - c.mean));
    }
    c.constant = c.max_deviation <= tol * (1.0 + std::abs(c.mean));
    return c;
}

ConstancyStats constancy_check(const ComplexField& field, const SampleSet& at, double tol)
{
    require_points(at);
    return constancy_check(sample(field, at), tol);
}

EtaEinsteinReport eta_einstein_test(const SpinCoefficients& sc, const MetricData& m, const Frame& f,
                                    const SampleSet& at, double tol)
{
    require_points(at);
    EtaEinsteinReport r;
    r.tolerance = effective_tolerance(sc, at, tol);
    const auto kappa = max_abs(sample(sc.kappa, at));
    if (kappa.value > r.tolerance) {
        throw GateError("geodesic", "criterion inapplicable: |kappa| = " + std::to_string(kappa.value) +
                                        " exceeds tolerance");
    }

    const SpinWeightedField sigma{sc.sigma, 2};
    const ComplexField p_sigma = thorn(sigma, sc, f).value;
    const ComplexField two_theta_sigma = 2.0 * ComplexField(sc.theta()) * sc.sigma;
    const ComplexField res1 = p_sigma + two_theta_sigma;
    const ComplexField res1_variant = p_sigma - two_theta_sigma;
    const ComplexField res2 = frame_derivative(sc.rho, Leg::Del, f) + eth_bar(sigma, sc, f).value;

    const auto ric = ricci_frame_components(m, f);
    const ComplexField a = ric.del_delbar;
    const ComplexField b = ric.xi_xi - ric.del_delbar;
    std::vector<ComplexField> fields{res1, res2, res1_variant, a, b};

    // Ric − a g − b η⊗η on all frame pairs; η(ξ) = 1, η(∂) = 0, g(∂,∂̄) = 1.
    const std::array<ComplexVector, 3> legs{complexify(f.xi), f.del, f.del_bar};
    const ComplexVector eta = complexify(f.eta);
    for (const auto& X : legs) {
        for (const auto& Y : legs) {
            const ComplexField ex = contract(eta, X);
            const ComplexField ey = contract(eta, Y);
            fields.push_back(contract2(m.ricci, X, Y) - a * pair(m, X, Y) - b * ex * ey);
        }
    }
    const auto s = sample(fields, at);
    const auto m1 = max_abs(s[0]);
    const auto m2 = max_abs(s[1]);
    r.residual1 = m1.value;
    r.residual2 = m2.value;
    r.worst1 = at.points[m1.index];
    r.worst2 = at.points[m2.index];
    r.residual1_variant = max_abs(s[2]).value;
    for (std::size_t p = 0; p < at.points.size(); ++p) {
        r.a.push_back(s[3][p].real());
        r.b.push_back(s[4][p].real());
    }
    r.a_stats = constancy_check(s[3], tol);
    r.b_stats = constancy_check(s[4], tol);
    for (std::size_t k = 5; k < s.size(); ++k) {
        r.cross_check = std::max(r.cross_check, max_abs(s[k]).value);
    }
    r.eta_einstein = r.residual1 <= r.tolerance && r.residual2 <= r.tolerance;
    return r;
}

KMuNuReport kmunu_extract(const SpinCoefficients& sc, const MetricData& m, const Frame& f, const SampleSet& at,
                          double tol)
{
    require_points(at);
    KMuNuReport r;
    r.tolerance = effective_tolerance(sc, at, tol);
    const auto kap = max_abs(sample(sc.kappa, at));
    if (kap.value > r.tolerance) {
        throw GateError("contact_metric", "not contact metric: kappa != 0 (max |kappa| = " +
                                              std::to_string(kap.value) + ")");
    }
    const auto om = sample_real(sc.omega(), at);
    double worst = 0.0;
    for (double w : om) {
        worst = std::max(worst, std::abs(w - 1.0));
    }
    if (worst > r.tolerance) {
        const bool zero = std::all_of(om.begin(), om.end(), [&](double w) { return std::abs(w) <= r.tolerance; });
        throw GateError("contact_metric", zero ? "not contact metric: omega=0"
                                               : "not contact metric: max |omega - 1| = " + std::to_string(worst));
    }

    const SpinWeightedField sigma{sc.sigma, 2};
    const ComplexField p_sigma = thorn(sigma, sc, f).value;
    const auto ric = ricci_frame_components(m, f);
    const std::vector<ComplexField> fields{sc.sigma, p_sigma, ComplexField(sc.theta()), eth_bar(sigma, sc, f).value,
                                           ric.xi_xi, ric.xi_del, ric.del_del};
    const auto s = sample(fields, at);
    const std::size_t n = at.points.size();

    Samples k(n);
    Samples mu(n);
    Samples nu(n);
    Samples abs_sigma(n);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t p = 0; p < n; ++p) {
        const auto sg = s[0][p];
        abs_sigma[p] = std::abs(sg);
        k[p] = 1.0 - std::norm(sg);
        r.k.push_back(k[p].real());
        if (std::abs(sg) < kIndeterminateShear) {
            ++r.indeterminate_points;
            mu[p] = nan;
            nu[p] = nan;
        } else {
            const auto q = s[1][p] / sg;  // iμ − ν
            mu[p] = q.imag();
            nu[p] = -q.real();
        }
        r.mu.push_back(mu[p].real());
        r.nu.push_back(nu[p].real());
        r.residual_k = std::max(r.residual_k, std::abs(s[4][p] - 2.0 * k[p]));
    }
    r.residual_theta = max_abs(s[2]).value;
    r.residual_eth_bar_sigma = max_abs(s[3]).value;
    r.residual_ricci_xi_del = max_abs(s[5]).value;
    r.k_stats = constancy_check(k, tol);
    r.mu_stats = constancy_check(mu, tol);
    r.nu_stats = constancy_check(nu, tol);
    r.abs_sigma_stats = constancy_check(abs_sigma, tol);
    const std::complex<double> fit{-r.nu_stats.mean.real(), r.mu_stats.mean.real()};
    for (std::size_t p = 0; p < n; ++p) {
        r.consistency = std::max(r.consistency, std::abs(s[1][p] - s[0][p] * fit));
        r.residual_ricci_del_del = std::max(r.residual_ricci_del_del, std::abs(s[6][p] - fit * s[0][p]));
    }
    r.is_kmunu = r.residual_theta <= r.tolerance && r.residual_eth_bar_sigma <= r.tolerance &&
                 r.residual_k <= r.tolerance && r.residual_ricci_xi_del <= r.tolerance;
    const bool mu_zero = std::abs(r.mu_stats.mean) + r.mu_stats.max_deviation <= r.tolerance;
    const bool nu_zero = std::abs(r.nu_stats.mean) + r.nu_stats.max_deviation <= r.tolerance;
    r.is_k00 = r.is_kmunu && mu_zero && nu_zero && r.consistency <= r.tolerance;
    return r;
}

DichotomyReport compact_dichotomy(const ClassificationReport& cls, const std::optional<EtaEinsteinReport>& ee,
                                  const SpinCoefficients& sc, const Frame& f, const SampleSet& at)
{
    DichotomyReport d;
    if (!cls.holds("normal")) {
        d.reason = "not normal";
        return d;
    }
    if (!ee || !ee->eta_einstein) {
        d.reason = "not eta-Einstein";
        return d;
    }
    d.applicable = true;
    const auto omega = constancy_check(ComplexField(sc.omega()), at, kDefaultTolerance);
    d.omega_deviation = omega.max_deviation;
    d.max_del_theta = max_abs(sample(frame_derivative(ComplexField(sc.theta()), Leg::Del, f), at)).value;
    d.alpha_sasakian_constant_twist = cls.holds("alpha_sasakian") && d.omega_deviation <= cls.tolerance;
    d.beta_kenmotsu_horizontal_expansion = cls.holds("beta_kenmotsu") && d.max_del_theta <= cls.tolerance;
    d.escapes = !d.alpha_sasakian_constant_twist && !d.beta_kenmotsu_horizontal_expansion;
    if (d.escapes) {
        d.note = "normal and eta-Einstein but neither alpha-Sasakian of constant twist nor beta-Kenmotsu with "
                 "horizontally constant expansion; consistent only because the chart is not compact";
    }
    return d;
}

}  // namespace acmnp
