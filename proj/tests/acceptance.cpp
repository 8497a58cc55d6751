// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "acmnp/random_structure.hpp"
#include "acmnp/report.hpp"
#include "expr_gen.hpp"

using namespace acmnp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    // Records a named requirement; the first failures are kept in the detail.
    void require(bool ok, const std::string& what)
    {
        if (ok) return;
        if (pass) detail.clear();
        if (detail.size() < 400) detail += (detail.empty() ? "" : "; ") + what;
        pass = false;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Manifest golden(const std::string& name) { return load_manifest(fs::path(ACMNP_MANIFEST_DIR) / (name + ".acm")); }

std::vector<std::string> shipped_manifests()
{
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(ACMNP_MANIFEST_DIR)) {
        if (e.path().extension() == ".acm") names.push_back(e.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

double max_on(const ComplexField& f, const SampleSet& s) { return max_abs(sample(f, s)).value; }

double max_on(const Expr& e, const SampleSet& s) { return max_on(ComplexField(e), s); }

double min_on(const Expr& e, const SampleSet& s)
{
    double m = INFINITY;
    for (const auto& z : sample(ComplexField(e), s)) m = std::min(m, std::abs(z));
    return m;
}

ClassificationReport classify(const Structure& st) { return classify_structure(st.spin, st.acm, st.at, st.tol); }

// Largest residual among the named, non-skipped entries; a missing or
// skipped entry fails the outcome.
double entries_max(const IdentityResidualReport& r, const std::vector<std::string>& ids, Outcome& out,
                   const std::string& where)
{
    double worst = 0.0;
    for (const auto& id : ids) {
        const IdentityEntry* e = r.find(id);
        if (e == nullptr || e->skipped) {
            out.require(false, where + ": " + id + (e ? " skipped (" + e->skip_reason + ")" : " missing"));
            continue;
        }
        worst = std::max(worst, e->max_residual);
    }
    return worst;
}

Outcome identity_suite()
{
    Outcome out;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const RandomStructure r = random_structure(seed, {0.1});
        const auto sachs = sachs_residuals(r.s.metric, r.s.frame, r.s.spin);
        const auto b2 = bianchi2_residuals(r.s.metric, r.s.frame, r.s.spin);
        double m = 0.0;
        for (const auto& f : sachs) m = std::max(m, max_on(f, r.s.at));
        for (const auto& f : b2) m = std::max(m, max_on(f, r.s.at));
        out.require(m <= 1e-6, "seed " + std::to_string(seed) + fmt(" residual %.3e", m));
        worst = std::max(worst, m);
    }
    if (out.pass) out.detail = "50 seeds, max residual " + fmt("%.3e", worst);
    return out;
}

Outcome gauge_covariance()
{
    Outcome out;
    const std::vector<std::string> ids{"gauge_kappa", "gauge_rho",    "gauge_sigma",  "gauge_epsilon",
                                       "gauge_beta",  "covariance_P", "covariance_eth", "covariance_ethbar"};
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RandomStructure r = random_structure(seed, {0.1});
        const Expr t = random_gauge_angle(seed);
        const auto vals = sample(ComplexField(t), r.s.at);
        double lo = INFINITY;
        double hi = -INFINITY;
        for (const auto& v : vals) {
            lo = std::min(lo, v.real());
            hi = std::max(hi, v.real());
        }
        out.require(hi - lo > 1e-3, "seed " + std::to_string(seed) + ": gauge angle is constant");
        const IdentityResidualReport rep = verify_gauge_covariance(r.s.metric, r.s.frame, t, r.s.at, r.s.tol);
        const double m = entries_max(rep, ids, out, "seed " + std::to_string(seed));
        out.require(m <= 1e-8, "seed " + std::to_string(seed) + fmt(" residual %.3e", m));
        worst = std::max(worst, m);
    }
    if (out.pass) out.detail = "20 seeds, 8 laws, max residual " + fmt("%.3e", worst);
    return out;
}

Outcome golden_cosymplectic()
{
    Outcome out;
    const Structure st = instantiate(golden("flat"));
    const ClassificationReport c = classify(st);
    out.require(c.holds("cosymplectic"), "not cosymplectic");
    out.require(c.uniform_rank && *c.uniform_rank == 1, "rank is not 1");
    const EtaEinsteinReport e = eta_einstein_test(st.spin, st.metric, st.frame, st.at, st.tol);
    out.require(e.eta_einstein, "not eta-Einstein");
    double ab = 0.0;
    for (std::size_t i = 0; i < e.a.size(); ++i) ab = std::max({ab, std::abs(e.a[i]), std::abs(e.b[i])});
    out.require(ab <= 1e-12, fmt("max |a|,|b| = %.3e", ab));
    double worst = std::max(e.residual1, e.residual2);
    const IdentityResidualReport r = verify_all(st.metric, st.frame, st.spin, st.at, st.tol);
    for (const auto& entry : r.entries) {
        if (entry.skipped) continue;
        worst = std::max(worst, entry.max_residual);
    }
    out.require(worst <= 1e-12, fmt("max residual %.3e", worst));
    if (out.pass) out.detail = "cosymplectic, rank 1, a = b = 0, max residual " + fmt("%.3e", worst);
    return out;
}

Outcome golden_kenmotsu()
{
    Outcome out;
    const Structure st = instantiate(golden("hyperbolic_kenmotsu"));
    const SpinCoefficients& sc = st.spin;
    const Expr theta = sc.theta();
    const double dt = max_on(theta - Expr(1.0), st.at);
    const double om = max_on(sc.omega(), st.at);
    const double ka = max_on(sc.kappa, st.at);
    const double si = max_on(sc.sigma, st.at);
    out.require(dt <= 1e-9, fmt("|theta - 1| = %.3e", dt));
    out.require(om <= 1e-9, fmt("|omega| = %.3e", om));
    out.require(ka <= 1e-9 && si <= 1e-9, "kappa or sigma nonzero");
    out.require(classify(st).holds("kenmotsu"), "not Kenmotsu");

    const EtaEinsteinReport e = eta_einstein_test(sc, st.metric, st.frame, st.at, st.tol);
    out.require(e.eta_einstein, "not eta-Einstein");
    double da = 0.0;
    double db = 0.0;
    for (std::size_t i = 0; i < e.a.size(); ++i) {
        da = std::max(da, std::abs(e.a[i] + 2.0));
        db = std::max(db, std::abs(e.b[i]));
    }
    out.require(da <= 1e-9 && db <= 1e-9, fmt("|a + 2| = %.3e", da) + fmt(", |b| = %.3e", db));

    const RicciFrame ric = ricci_frame_components(st.metric, st.frame);
    const double dr = max_on(ric.xi_xi + ComplexField(2.0), st.at);
    out.require(dr <= 1e-9, fmt("|Ric(xi,xi) + 2| = %.3e", dr));
    // Expansion-twist form with +2ξΘ; ξΘ = 0 here, so the sign of that term
    // does not matter.
    const ComplexField th(theta);
    const ComplexField w(sc.omega());
    const ComplexField plus_form = 2.0 * frame_derivative(th, Leg::Xi, st.frame) -
                                   2.0 * ComplexField(abs2(sc.sigma)) - 2.0 * th * th + 2.0 * w * w;
    const double dd = max_on(ric.xi_xi - plus_form, st.at);
    out.require(dd <= 1e-9, fmt("expansion form differs by %.3e", dd));
    if (out.pass) out.detail = "Theta = 1, omega = 0, Kenmotsu, a = -2, b = 0, Ric(xi,xi) = -2";
    return out;
}

Outcome golden_quasi_sasakian()
{
    Outcome out;
    const Manifest mf = golden("heisenberg");
    const Structure st = instantiate(mf);
    const SpinCoefficients& sc = st.spin;
    const double z = std::max({max_on(sc.kappa, st.at), max_on(sc.sigma, st.at), max_on(sc.theta(), st.at)});
    out.require(z <= 1e-9, fmt("kappa, sigma, Theta reach %.3e", z));
    const double dw = std::max(std::abs(max_on(sc.omega(), st.at) - 0.5), std::abs(min_on(sc.omega(), st.at) - 0.5));
    out.require(dw <= 1e-9, fmt("||omega| - 1/2| = %.3e", dw));
    const ConstancyStats cs = constancy_check(ComplexField(sc.omega()), st.at, 1e-9);
    out.require(cs.constant && cs.max_deviation <= 1e-9, fmt("omega deviation %.3e", cs.max_deviation));
    out.require(classify(st).holds("alpha_sasakian"), "not alpha-Sasakian");

    if (!mf.orbit) {
        out.require(false, "manifest has no orbit");
        return out;
    }
    const OrbitReport o = raychaudhuri_orbit_check(st.metric, st.frame, sc, mf.orbit->x0, mf.orbit->t0, mf.orbit->t1,
                                                   mf.orbit->steps, mf.domain, mf.params, st.tol);
    out.require(!o.truncated, "orbit truncated");
    out.require(o.identities.all_pass(), "orbit identities fail");
    double dr = 0.0;
    for (const auto& s : o.samples) dr = std::max(dr, std::abs(s.ric_xi_xi - 2.0 * s.omega * s.omega));
    out.require(dr <= 1e-7, fmt("|Ric(xi,xi) - 2 omega^2| = %.3e along the orbit", dr));
    if (out.pass) {
        out.detail = "|omega| = 1/2 constant, alpha-Sasakian, Ric = 2 omega^2 on " + std::to_string(o.samples.size()) +
                     fmt(" orbit samples (max %.1e)", dr);
    }
    return out;
}

Outcome golden_sheared_contact()
{
    Outcome out;
    const Structure st = instantiate(golden("heisenberg_aniso"));
    const SpinCoefficients& sc = st.spin;
    const ClassificationReport c = classify(st);
    out.require(c.holds("contact_metric"), "not contact metric");
    const double dw = std::max(std::abs(max_on(sc.omega(), st.at) - 1.0), std::abs(min_on(sc.omega(), st.at) - 1.0));
    out.require(dw <= 1e-8, fmt("||omega| - 1| = %.3e", dw));

    const ConstancyStats s = constancy_check(ComplexField(sqrt(abs2(sc.sigma))), st.at, 1e-8);
    const double smin = min_on(sqrt(abs2(sc.sigma)), st.at);
    out.require(s.constant, "|sigma| not constant");
    out.require(smin > 1e-8, fmt("|sigma| is not positive (min %.3e)", smin));

    const HReport h = h_tensor(st.acm, st.metric, sc.sigma, sc.kappa, st.at);
    double de = 0.0;
    for (std::size_t i = 0; i < h.eigenvalues.size(); ++i) {
        const double a = h.abs_sigma[i];
        const auto& ev = h.eigenvalues[i];
        de = std::max({de, std::abs(std::max(ev[0], ev[1]) - a), std::abs(std::min(ev[0], ev[1]) + a)});
    }
    out.require(de <= 1e-8, fmt("h eigenvalues differ from +-|sigma| by %.3e", de));

    const KMuNuReport k = kmunu_extract(sc, st.metric, st.frame, st.at, st.tol);
    out.require(k.is_kmunu, "kmunu_extract does not pass");
    out.require(k.k_stats.constant, "k not constant");
    double dk = 0.0;
    for (std::size_t i = 0; i < k.k.size(); ++i) {
        const double a = h.abs_sigma[i];
        dk = std::max(dk, std::abs(k.k[i] - (1.0 - a * a)));
    }
    out.require(dk <= 1e-8, fmt("|k - (1 - |sigma|^2)| = %.3e", dk));
    if (out.pass) out.detail = "contact metric, |sigma| = " + fmt("%.6g", s.mean.real()) + ", h = +-|sigma|, k constant";
    return out;
}

Outcome counterexample()
{
    Outcome out;
    const Structure st = instantiate(golden("remark"));
    const SpinCoefficients& sc = st.spin;
    const double ks = std::max(max_on(sc.kappa, st.at), max_on(sc.sigma, st.at));
    out.require(ks <= 1e-8, fmt("kappa, sigma reach %.3e", ks));
    const ClassificationReport c = classify(st);
    out.require(c.holds("normal"), "not normal");
    out.require(c.uniform_rank && *c.uniform_rank == 3, "rank is not 3 everywhere");
    const EtaEinsteinReport e = eta_einstein_test(sc, st.metric, st.frame, st.at, st.tol);
    out.require(e.residual1 <= 1e-7 && e.residual2 <= 1e-7,
                fmt("eta-Einstein residuals %.3e", e.residual1) + fmt(", %.3e", e.residual2));
    out.require(!c.holds("alpha_sasakian"), "classified alpha-Sasakian");
    out.require(!c.holds("beta_kenmotsu"), "classified beta-Kenmotsu");
    const double th = max_on(sc.theta(), st.at);
    const double om = max_on(sc.omega(), st.at);
    out.require(th > 1e-3 && om > 1e-3, fmt("max |Theta| = %.3e", th) + fmt(", max |omega| = %.3e", om));
    if (out.pass) {
        out.detail = "normal, rank 3, eta-Einstein" + fmt(" (residuals %.1e),", std::max(e.residual1, e.residual2)) +
                     fmt(" max |Theta| = %.3g,", th) + fmt(" max |omega| = %.3g", om);
    }
    return out;
}

Outcome contact_eta_einstein_k00()
{
    Outcome out;
    std::vector<std::string> exercised;
    bool sasakian_seen = false;
    for (const auto& name : shipped_manifests()) {
        const CommandResult r = run_command(Command::Report, golden(name));
        const auto& flags = r.tree.at("classification").at("flags");
        const auto& ee = r.tree.at("eta_einstein");
        if (!flags.at("contact_metric").at("holds").get<bool>()) continue;
        if (!ee.contains("eta_einstein") || !ee.at("eta_einstein").get<bool>()) continue;
        exercised.push_back(name);
        sasakian_seen = sasakian_seen || flags.at("sasakian").at("holds").get<bool>();
        const auto& b = r.tree.at("contact_eta_einstein");
        out.require(b.at("applicable").get<bool>() && b.at("holds").get<bool>(), name + ": check not asserted");
        out.require(b.at("k00").get<bool>(), name + ": not (k,0,0)");
        out.require(b.at("abs_sigma_constant").get<bool>(), name + ": |sigma| not constant");
        out.require(b.at("k_constant").get<bool>(), name + ": k not constant");
    }
    out.require(sasakian_seen, "no Sasakian input exercised");
    if (out.pass) {
        out.detail = "(k,0,0) with constant |sigma| on";
        for (const auto& n : exercised) out.detail += " " + n;
    }
    return out;
}

Outcome proof_identities()
{
    Outcome out;
    const std::vector<std::string> ids{"grad_decomposition", "e2e3_bracket", "div_phi_grad", "subelliptic",
                                       "xi_omega"};
    double worst = 0.0;
    int golden_count = 0;
    for (const auto& name : shipped_manifests()) {
        const Structure st = instantiate(golden(name));
        if (!classify(st).holds("geodesic")) continue;
        ++golden_count;
        const IdentityResidualReport r = verify_all(st.metric, st.frame, st.spin, st.at, st.tol);
        const double m = entries_max(r, ids, out, name);
        out.require(m <= 1e-7, name + fmt(" residual %.3e", m));
        worst = std::max(worst, m);
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const RandomStructure rs = random_structure(seed, {0.1, RandomFamily::Geodesic});
        const IdentityResidualReport r = verify_all(rs.s.metric, rs.s.frame, rs.s.spin, rs.s.at, rs.s.tol);
        const double m = entries_max(r, ids, out, "seed " + std::to_string(seed));
        out.require(m <= 1e-7, "seed " + std::to_string(seed) + fmt(" residual %.3e", m));
        worst = std::max(worst, m);
    }
    if (out.pass) {
        out.detail = std::to_string(golden_count) + " golden + 20 random geodesic inputs, max residual " +
                     fmt("%.3e", worst);
    }
    return out;
}

Outcome compact_dichotomy_consistency()
{
    Outcome out;
    int normal = 0;
    bool remark_flagged = false;
    for (const auto& name : shipped_manifests()) {
        const CommandResult r = run_command(Command::Report, golden(name));
        const auto& d = r.tree.at("compact_dichotomy");
        if (!r.tree.at("classification").at("flags").at("normal").at("holds").get<bool>()) continue;
        ++normal;
        out.require(d.at("applicable").get<bool>(), name + ": dichotomy not evaluated");
        if (!d.at("applicable").get<bool>()) continue;
        const bool escapes = d.at("escapes").get<bool>();
        if (name == "remark") {
            const std::string note = d.value("note", "");
            remark_flagged = escapes && note.find("not compact") != std::string::npos;
            out.require(remark_flagged, "remark: escape not flagged with the compactness note");
        } else {
            const bool alt = d.at("alpha_sasakian_constant_twist").get<bool>() ||
                             d.at("beta_kenmotsu_horizontal_expansion").get<bool>();
            out.require(!escapes && alt, name + ": escapes the dichotomy");
        }
    }
    out.require(remark_flagged, "remark not among the normal examples");
    if (out.pass) out.detail = std::to_string(normal) + " normal examples, remark flagged as escaping (non-compact)";
    return out;
}

Outcome numerical_hygiene()
{
    Outcome out;
    acmnp::testing::ExprGen gen(1000003);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const Expr e = gen.make(4);
        const Point p = gen.point();
        const int i = n % 3;
        const double exact = evaluate(differentiate(e, i), p);
        const double fd = acmnp::testing::central_difference(e, p, i, 1e-5);
        worst = std::max(worst, std::abs(exact - fd) / (1.0 + std::abs(exact)));
    }
    out.require(worst <= 1e-6, fmt("worst relative error %.3e", worst));
    if (out.pass) out.detail = "1000 samples, worst relative error " + fmt("%.3e", worst);
    return out;
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"identity suite on random structures", identity_suite},
        {"gauge covariance", gauge_covariance},
        {"golden cosymplectic", golden_cosymplectic},
        {"golden Kenmotsu", golden_kenmotsu},
        {"golden quasi-Sasakian", golden_quasi_sasakian},
        {"golden sheared contact metric", golden_sheared_contact},
        {"normal eta-Einstein counterexample", counterexample},
        {"contact eta-Einstein implies (k,0,0)", contact_eta_einstein_k00},
        {"geodesic-case identities", proof_identities},
        {"compact dichotomy consistency", compact_dichotomy_consistency},
        {"derivatives vs finite differences", numerical_hygiene},
    };
    int failed = 0;
    for (std::size_t n = 0; n < criteria.size(); ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[n].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2zu %s: %s (%.2fs) %s\n", n + 1, o.pass ? "PASS" : "FAIL", criteria[n].first, secs,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
