#include "acmnp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace acmnp {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::Spin, "spin"},
    {Command::Classify, "classify"},
    {Command::EtaEinstein, "eta-einstein"},
    {Command::KMuNu, "kmunu"},
    {Command::Verify, "verify"},
    {Command::Orbit, "orbit"},
    {Command::Report, "report"},
    {Command::Random, "random"},
}};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string hex64(std::uint64_t v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json j_point(const Point& p) { return json::array({p[0], p[1], p[2]}); }

json j_complex(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

json j_stats(const ConstancyStats& s)
{
    return {{"constant", s.constant}, {"mean", j_complex(s.mean)}, {"max_deviation", s.max_deviation}};
}

json j_identities(const IdentityResidualReport& r)
{
    json entries = json::array();
    for (const auto& e : r.entries) {
        json je{{"id", e.id}, {"skipped", e.skipped}, {"tolerance", e.tolerance}};
        if (e.skipped) {
            je["skip_reason"] = e.skip_reason;
        } else {
            je["max_residual"] = e.max_residual;
            je["worst_point"] = j_point(e.worst);
            je["pass"] = e.pass;
        }
        if (e.informational) {
            je["informational"] = true;
        }
        entries.push_back(std::move(je));
    }
    return {{"entries", entries}, {"notes", r.notes}, {"all_pass", r.all_pass()}};
}

void text_identities(std::ostringstream& out, const IdentityResidualReport& r)
{
    for (const auto& e : r.entries) {
        char buf[256];
        if (e.skipped) {
            std::snprintf(buf, sizeof buf, "  %-32s skipped (%s)\n", e.id.c_str(), e.skip_reason.c_str());
        } else {
            const char* status = e.informational ? (e.pass ? "holds" : "differs") : (e.pass ? "pass" : "FAIL");
            std::snprintf(buf, sizeof buf, "  %-32s %s  %.3e (tol %.1e)%s\n", e.id.c_str(), status, e.max_residual,
                          e.tolerance, e.informational ? " [comparison form, not counted]" : "");
        }
        out << buf;
    }
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
}

json j_classification(const ClassificationReport& c, const FormsReport& forms)
{
    json flags = json::object();
    for (const auto& f : c.flags) {
        flags[f.name] = {{"holds", f.holds}, {"max_violation", f.max_violation}, {"witness", j_point(f.witness)}};
    }
    json rank{{"per_point", c.rank},
              {"max_d_eta", forms.max_d_eta},
              {"max_eta_wedge_d_eta", forms.max_eta_d_eta},
              {"phi_formula_residual", forms.phi_formula}};
    rank["uniform"] = c.uniform_rank ? json(*c.uniform_rank) : json("non-uniform rank");
    return {{"flags", flags},
            {"tolerance", c.tolerance},
            {"coefficient_scale", c.coefficient_scale},
            {"orientation", c.orientation},
            {"rank", rank},
            {"rank2_on_normal", c.rank2_on_normal},
            {"implication_violations", implication_violations(c)}};
}

std::vector<std::string> held_flags(const ClassificationReport& c)
{
    std::vector<std::string> out;
    for (const auto& f : c.flags) {
        if (f.holds) out.push_back(f.name);
    }
    return out;
}

json j_h(const HReport& h)
{
    json eig = json::array();
    for (const auto& e : h.eigenvalues) eig.push_back(json::array({e[0], e[1]}));
    return {{"route_residual", h.route_residual},
            {"matrix_residual", h.matrix_residual},
            {"eigen_residual", h.eigen_residual},
            {"angle_residual", h.angle_residual},
            {"eigenvalues", eig}};
}

json j_eta_einstein(const EtaEinsteinReport& e)
{
    return {{"residual1", e.residual1},
            {"residual2", e.residual2},
            {"worst1", j_point(e.worst1)},
            {"worst2", j_point(e.worst2)},
            {"residual1_opposite_sign", e.residual1_variant},
            {"eta_einstein", e.eta_einstein},
            {"tolerance", e.tolerance},
            {"a_stats", j_stats(e.a_stats)},
            {"b_stats", j_stats(e.b_stats)},
            {"cross_check", e.cross_check}};
}

json j_kmunu(const KMuNuReport& k)
{
    return {{"k_stats", j_stats(k.k_stats)},
            {"mu_stats", j_stats(k.mu_stats)},
            {"nu_stats", j_stats(k.nu_stats)},
            {"abs_sigma_stats", j_stats(k.abs_sigma_stats)},
            {"indeterminate_points", k.indeterminate_points},
            {"residual_theta", k.residual_theta},
            {"residual_eth_bar_sigma", k.residual_eth_bar_sigma},
            {"residual_k", k.residual_k},
            {"residual_ricci_xi_del", k.residual_ricci_xi_del},
            {"consistency", k.consistency},
            {"residual_ricci_del_del", k.residual_ricci_del_del},
            {"is_kmunu", k.is_kmunu},
            {"is_k00", k.is_k00},
            {"tolerance", k.tolerance}};
}

json j_dichotomy(const DichotomyReport& d)
{
    json j{{"applicable", d.applicable}};
    if (!d.applicable) {
        j["reason"] = d.reason;
        return j;
    }
    j["alpha_sasakian_constant_twist"] = d.alpha_sasakian_constant_twist;
    j["beta_kenmotsu_horizontal_expansion"] = d.beta_kenmotsu_horizontal_expansion;
    j["escapes"] = d.escapes;
    j["omega_deviation"] = d.omega_deviation;
    j["max_del_theta"] = d.max_del_theta;
    if (!d.note.empty()) j["note"] = d.note;
    return j;
}

json j_orbit(const OrbitReport& o)
{
    json samples = json::array();
    for (const auto& s : o.samples) {
        samples.push_back({{"t", s.t},
                           {"x", j_point(s.x)},
                           {"theta", s.theta},
                           {"omega", s.omega},
                           {"ric_xi_xi", s.ric_xi_xi},
                           {"abs_sigma2", s.abs_sigma2},
                           {"theta_ode", s.theta_ode},
                           {"omega_ode", s.omega_ode}});
    }
    json j{{"identities", j_identities(o.identities)},
           {"samples", samples},
           {"truncated", o.truncated},
           {"cointegration_theta", o.cointegration_theta},
           {"cointegration_omega", o.cointegration_omega}};
    if (!o.warning.empty()) j["warning"] = o.warning;
    return j;
}

json header(const Manifest& mf, const Structure& s, Command c)
{
    return {{"tool_version", kToolVersion},
            {"command", command_name(c)},
            {"manifest", mf.source_name},
            {"manifest_digest", hex64(mf.digest)},
            {"orientation", mf.orientation},
            {"grid_points", s.at.points.size()},
            {"tolerance", s.tol},
            {"scope", "all statements refer to the sampled points only"}};
}

// Θ, ω, |σ| always; α = ω and β_s = Θ on normal inputs; a, b when the
// η-Einstein test ran.
json field_tables(const Structure& s, const ClassificationReport& cls, const EtaEinsteinReport* ee)
{
    json points = json::array();
    for (const auto& p : s.at.points) points.push_back(j_point(p));
    json t{{"points", points}, {"theta", cls.theta}, {"omega", cls.omega}, {"abs_sigma", cls.abs_sigma}};
    if (cls.holds("normal")) {
        t["alpha"] = cls.omega;
        t["beta_s"] = cls.theta;
    }
    if (ee != nullptr) {
        t["a"] = ee->a;
        t["b"] = ee->b;
    }
    return t;
}

struct Pipeline {
    const Manifest& mf;
    Structure s;
    std::ostringstream text;
    json tree;
    bool ok = true;

    Pipeline(const Manifest& m, const Overrides& ov, Command c) : mf(m), s(instantiate(m, ov))
    {
        tree = header(mf, s, c);
        text << command_name(c) << " " << mf.source_name << " (" << s.at.points.size()
             << " points, orientation " << (mf.orientation > 0 ? "+1" : "-1") << ")\n";
    }

    ClassificationReport classification()
    {
        const ClassificationReport cls = classify_structure(s.spin, s.acm, s.at, s.tol);
        FormulaInputs in{s.spin.kappa, s.spin.omega()};
        const FormsReport forms = fundamental_forms(s.acm, s.at, cls.tolerance, in);
        tree["classification"] = j_classification(cls, forms);
        const HReport h = h_tensor(s.acm, s.metric, s.spin.sigma, s.spin.kappa, s.at);
        tree["h_tensor"] = j_h(h);
        const auto viol = implication_violations(cls);
        ok = ok && viol.empty() && !cls.rank2_on_normal;

        text << "  flags:";
        for (const auto& f : held_flags(cls)) text << " " << f;
        text << "\n  rank: "
             << (cls.uniform_rank ? std::to_string(*cls.uniform_rank) : std::string("non-uniform rank")) << "\n";
        const auto rng = [](const std::vector<double>& v) {
            double lo = INFINITY;
            double hi = -INFINITY;
            for (double x : v) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            return fmt("[%.6g, ", lo) + fmt("%.6g]", hi);
        };
        text << "  theta " << rng(cls.theta) << "  omega " << rng(cls.omega) << "  |sigma| " << rng(cls.abs_sigma)
             << "\n";
        for (const auto& v : viol) text << "  implication violated: " << v << "\n";
        return cls;
    }

    std::optional<EtaEinsteinReport> eta_einstein(bool required)
    {
        try {
            EtaEinsteinReport ee = eta_einstein_test(s.spin, s.metric, s.frame, s.at, s.tol);
            tree["eta_einstein"] = j_eta_einstein(ee);
            text << "  eta-Einstein: " << (ee.eta_einstein ? "yes" : "no") << "  residuals "
                 << fmt("%.3e", ee.residual1) << " " << fmt("%.3e", ee.residual2);
            if (ee.eta_einstein) {
                text << "  a " << (ee.a_stats.constant ? fmt("= %.10g", ee.a_stats.mean.real()) : "non-constant")
                     << "  b " << (ee.b_stats.constant ? fmt("= %.10g", ee.b_stats.mean.real()) : "non-constant");
            }
            text << "\n";
            if (required) ok = ok && ee.eta_einstein;
            return ee;
        } catch (const GateError& g) {
            tree["eta_einstein"] = {{"refused", true}, {"gate", g.gate()}, {"message", g.what()}};
            text << "  eta-Einstein: inapplicable (" << g.what() << ")\n";
            if (required) ok = false;
            return std::nullopt;
        }
    }

    std::optional<KMuNuReport> kmunu(bool required)
    {
        try {
            KMuNuReport k = kmunu_extract(s.spin, s.metric, s.frame, s.at, s.tol);
            tree["kmunu"] = j_kmunu(k);
            text << "  (k,mu,nu): " << (k.is_kmunu ? "yes" : "no");
            if (k.is_k00) text << " (k,0,0)";
            text << "  k " << (k.k_stats.constant ? fmt("= %.10g", k.k_stats.mean.real()) : "non-constant") << "\n";
            if (required) ok = ok && k.is_kmunu;
            return k;
        } catch (const GateError& g) {
            tree["kmunu"] = {{"refused", true}, {"gate", g.gate()}, {"message", g.what()}};
            text << "  (k,mu,nu): refused (" << g.what() << ")\n";
            if (required) ok = false;
            return std::nullopt;
        }
    }

    void identities()
    {
        const IdentityResidualReport r = verify_all(s.metric, s.frame, s.spin, s.at, s.tol);
        tree["identities"] = j_identities(r);
        text_identities(text, r);
        ok = ok && r.all_pass();
    }

    bool orbit()
    {
        if (!mf.orbit) return false;
        const auto& o = *mf.orbit;
        const OrbitReport r = raychaudhuri_orbit_check(s.metric, s.frame, s.spin, o.x0, o.t0, o.t1, o.steps,
                                                       mf.domain, mf.params, s.tol);
        tree["orbit"] = j_orbit(r);
        text << "  orbit: " << r.samples.size() << " samples"
             << fmt(", co-integration |dTheta| %.3e", r.cointegration_theta)
             << fmt(" |domega| %.3e", r.cointegration_omega) << "\n";
        text_identities(text, r.identities);
        ok = ok && r.identities.all_pass();
        return true;
    }

    CommandResult finish()
    {
        tree["pass"] = ok;
        text << (ok ? "PASS" : "FAIL") << "\n";
        return {tree, text.str(), ok ? 0 : 1};
    }
};

}  // namespace

std::optional<Command> parse_command(std::string_view name)
{
    for (const auto& [c, n] : kCommands) {
        if (n == name) return c;
    }
    return std::nullopt;
}

std::string_view command_name(Command c)
{
    for (const auto& [k, n] : kCommands) {
        if (k == c) return n;
    }
    return "?";
}

CommandResult run_command(Command c, const Manifest& mf, const Overrides& ov)
{
    if (c == Command::Random) {
        throw InputError("random does not take a manifest");
    }
    if (c == Command::Orbit && !mf.orbit) {
        throw InputError("orbit requires an [orbit] section");
    }
    Pipeline p(mf, ov, c);
    switch (c) {
    case Command::Spin: {
        const std::array<ComplexField, 5> all{p.s.spin.kappa, p.s.spin.rho, p.s.spin.sigma, p.s.spin.epsilon,
                                              p.s.spin.beta};
        static const std::array<const char*, 5> names{"kappa", "rho", "sigma", "epsilon", "beta"};
        const auto v = sample(all, p.s.at);
        json points = json::array();
        for (const auto& q : p.s.at.points) points.push_back(j_point(q));
        json tables{{"points", points}};
        for (std::size_t k = 0; k < 5; ++k) {
            json col = json::array();
            for (const auto& z : v[k]) col.push_back(j_complex(z));
            tables[names[k]] = col;
            p.text << "  " << names[k] << fmt(": max |.| %.6g\n", max_abs(v[k]).value);
        }
        p.tree["spin_coefficients"] = tables;
        double re_eps = 0.0;
        for (const auto& z : v[3]) re_eps = std::max(re_eps, std::abs(z.real()));
        p.tree["max_re_epsilon"] = re_eps;
        p.ok = re_eps <= identity_tolerance(p.s.spin, p.s.at, p.s.tol);
        break;
    }
    case Command::Classify:
        p.classification();
        break;
    case Command::EtaEinstein:
        p.eta_einstein(true);
        break;
    case Command::KMuNu:
        p.kmunu(true);
        break;
    case Command::Verify:
        p.identities();
        break;
    case Command::Orbit:
        p.orbit();
        break;
    case Command::Report: {
        const ClassificationReport cls = p.classification();
        const auto ee = p.eta_einstein(false);
        std::optional<KMuNuReport> k;
        if (cls.holds("contact_metric")) {
            k = p.kmunu(false);
        }
        // Contact metric and η-Einstein together must give a (k,0,0)
        // structure with constant |σ|.
        json contact_ee{{"applicable", false}};
        if (cls.holds("contact_metric") && ee && ee->eta_einstein && k) {
            const bool holds = k->is_k00 && k->abs_sigma_stats.constant && k->k_stats.constant;
            contact_ee = {{"applicable", true}, {"k00", k->is_k00}, {"abs_sigma_constant", k->abs_sigma_stats.constant},
                     {"k_constant", k->k_stats.constant}, {"holds", holds}};
            p.text << "  contact metric + eta-Einstein: " << (holds ? "(k,0,0) with constant |sigma|" : "VIOLATED")
                   << "\n";
            p.ok = p.ok && holds;
        }
        p.tree["contact_eta_einstein"] = contact_ee;
        const DichotomyReport d = compact_dichotomy(cls, ee, p.s.spin, p.s.frame, p.s.at);
        p.tree["compact_dichotomy"] = j_dichotomy(d);
        if (d.applicable) {
            p.text << "  compact dichotomy:";
            if (d.escapes) p.text << " escapes (" << d.note << ")";
            std::vector<std::string> kinds;
            if (d.alpha_sasakian_constant_twist) kinds.emplace_back("alpha-Sasakian with constant twist");
            if (d.beta_kenmotsu_horizontal_expansion) kinds.emplace_back("beta-Kenmotsu with del(Theta) = 0");
            for (std::size_t k = 0; k < kinds.size(); ++k) p.text << (k ? "; " : " ") << kinds[k];
            p.text << "\n";
        }
        p.identities();
        p.orbit();
        p.tree["fields"] = field_tables(p.s, cls, ee ? &*ee : nullptr);
        break;
    }
    case Command::Random:
        break;
    }
    return p.finish();
}

CommandResult run_random(const RandomRun& rr, const Overrides& ov)
{
    RandomOptions opt;
    opt.amplitude = rr.amplitude;
    opt.family = rr.family;
    if (ov.grid) opt.grid = *ov.grid;
    RandomStructure r;
    try {
        r = random_structure(rr.seed, opt);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const double tol = ov.tol.value_or(kDefaultTolerance);
    const Expr t = random_gauge_angle(rr.seed);
    IdentityResidualReport rep = verify_all(r.s.metric, r.s.frame, r.s.spin, r.s.at, tol, t);

    std::ostringstream text;
    text << "random seed " << rr.seed << fmt(" amplitude %.3g", rr.amplitude)
         << (rr.family == RandomFamily::Geodesic ? " (geodesic family)" : "") << " (" << r.s.at.points.size()
         << " points, " << r.attempts << " attempt" << (r.attempts == 1 ? "" : "s") << ")\n";
    text_identities(text, rep);
    const bool ok = rep.all_pass();
    text << (ok ? "PASS" : "FAIL") << "\n";

    json metric = json::array();
    for (const auto& c : r.components) metric.push_back(to_string(c));
    json xi = json::array();
    for (const auto& c : r.xi_raw) xi.push_back(to_string(c));
    json tree{{"tool_version", kToolVersion},
              {"command", "random"},
              {"seed", rr.seed},
              {"amplitude", rr.amplitude},
              {"family", rr.family == RandomFamily::Geodesic ? "geodesic" : "general"},
              {"attempts", r.attempts},
              {"metric", metric},
              {"xi", xi},
              {"gauge_angle", to_string(t)},
              {"grid_points", r.s.at.points.size()},
              {"tolerance", tol},
              {"identities", j_identities(rep)},
              {"pass", ok}};
    return {tree, text.str(), ok ? 0 : 1};
}

namespace {

void write_canonical(std::string& out, const json& j)
{
    switch (j.type()) {
    case json::value_t::object: {
        out += '{';
        bool first = true;
        for (const auto& [k, v] : j.items()) {  // nlohmann objects iterate in key order
            if (!first) out += ',';
            first = false;
            out += json(k).dump();
            out += ':';
            write_canonical(out, v);
        }
        out += '}';
        break;
    }
    case json::value_t::array: {
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            write_canonical(out, v);
        }
        out += ']';
        break;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
        } else {
            out += fmt("%.17g", v);
        }
        break;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j)
{
    std::string out;
    write_canonical(out, j);
    out += '\n';
    return out;
}

}  // namespace acmnp
