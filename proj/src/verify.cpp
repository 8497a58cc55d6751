#include "acmnp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace acmnp {

namespace {

struct Pending {
    std::string id;
    std::vector<ComplexField> parts;
    bool informational = false;
};

// Collects residual fields and samples all of them through one program.
class Batch {
public:
    Batch(const SampleSet& at, double tolerance) : at_(at), tolerance_(tolerance) {}

    void add(std::string id, std::vector<ComplexField> parts, bool informational = false)
    {
        pending_.push_back({std::move(id), std::move(parts), informational});
    }

    void skip(std::string id, std::string reason, bool informational = false)
    {
        IdentityEntry e;
        e.id = std::move(id);
        e.skipped = true;
        e.skip_reason = std::move(reason);
        e.tolerance = tolerance_;
        e.informational = informational;
        skipped_.push_back(std::move(e));
    }

    IdentityResidualReport run() const
    {
        std::vector<ComplexField> flat;
        for (const auto& p : pending_) {
            flat.insert(flat.end(), p.parts.begin(), p.parts.end());
        }
        const auto s = sample(flat, at_);
        IdentityResidualReport r;
        std::size_t k = 0;
        for (const auto& p : pending_) {
            IdentityEntry e;
            e.id = p.id;
            e.tolerance = tolerance_;
            e.informational = p.informational;
            for (std::size_t j = 0; j < p.parts.size(); ++j, ++k) {
                const auto m = max_abs(s[k]);
                if (!(m.value <= e.max_residual)) {
                    e.max_residual = m.value;
                    e.worst = at_.points[m.index];
                }
            }
            e.pass = e.max_residual <= tolerance_;
            r.entries.push_back(std::move(e));
        }
        r.entries.insert(r.entries.end(), skipped_.begin(), skipped_.end());
        return r;
    }

private:
    const SampleSet& at_;
    double tolerance_;
    std::vector<Pending> pending_;
    std::vector<IdentityEntry> skipped_;
};

std::vector<ComplexField> frame_parts(const Frame& f, const ComplexVector& v)
{
    return {contract(complexify(f.eta), v), contract(complexify(f.theta2), v), contract(complexify(f.theta3), v)};
}

ComplexVector apply_tensor(const Matrix3& T, const ComplexVector& v)
{
    ComplexVector out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[i] += T[i][j] * v[j];
        }
    }
    return out;
}

// −√2 (Re q e2 − Im q e3).
ComplexVector horizontal_field(const ComplexField& q, const Frame& f)
{
    const Expr c = -std::numbers::sqrt2;
    ComplexVector out;
    for (int k = 0; k < 3; ++k) {
        out[k] = c * (q.re * f.e2[k] - q.im * f.e3[k]);
    }
    return out;
}

ComplexField power(const ComplexField& e, int n)
{
    ComplexField base = n < 0 ? conj(e) : e;  // |e| = 1
    ComplexField out(1.0);
    for (int k = 0; k < std::abs(n); ++k) {
        out = out * base;
    }
    return out;
}

double max_kappa(const SpinCoefficients& sc, const SampleSet& at) { return max_abs(sample(sc.kappa, at)).value; }

}  // namespace

const IdentityEntry* IdentityResidualReport::find(std::string_view id) const
{
    for (const auto& e : entries) {
        if (e.id == id) {
            return &e;
        }
    }
    return nullptr;
}

bool IdentityResidualReport::all_pass() const
{
    return std::all_of(entries.begin(), entries.end(),
                       [](const IdentityEntry& e) { return e.informational || e.skipped || e.pass; });
}

void IdentityResidualReport::append(const IdentityResidualReport& other)
{
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

double identity_tolerance(const SpinCoefficients& sc, const SampleSet& at, double tol)
{
    const double s = effective_tolerance(sc, at, 1.0) - 1.0;
    return tol * (1.0 + s) * (1.0 + s);
}

Expr default_gauge_angle()
{
    static const Expr t = parse_expression("0.3*sin(x + y) + 0.2*cos(z)", default_coord_names());
    return t;
}

IdentityResidualReport verify_all(const MetricData& m, const Frame& f, const SpinCoefficients& sc,
                                  const SampleSet& at, double tol, const std::optional<Expr>& gauge)
{
    const double tol_id = identity_tolerance(sc, at, tol);
    const double tol_eff = effective_tolerance(sc, at, tol);
    Batch batch(at, tol_id);

    const auto sachs = sachs_residuals(m, f, sc);
    for (int k = 0; k < 5; ++k) {
        batch.add("sachs" + std::to_string(k + 1), {sachs[k]});
    }
    const auto b2 = bianchi2_residuals(m, f, sc);
    batch.add("bianchi2a", {b2[0]});
    batch.add("bianchi2b", {b2[1]});
    const auto b2v = bianchi2_residuals_variant(m, f, sc);
    batch.add("bianchi2a_variant", {b2v[0]}, true);
    batch.add("bianchi2b_variant", {b2v[1]}, true);

    const auto& [k, r, s, e, b] = std::tie(sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta);
    const ComplexVector xi = complexify(f.xi);
    batch.add("epsilon_imaginary", {ComplexField(e.re)});

    const auto ric_direct = ricci_frame_components(m, f);
    const auto ric_riemann = ricci_frame_components(ricci_from_riemann(riemann(m)), f);
    batch.add("ricci_two_paths", {ric_direct.xi_xi - ric_riemann.xi_xi, ric_direct.xi_del - ric_riemann.xi_del,
                                  ric_direct.del_del - ric_riemann.del_del,
                                  ric_direct.del_delbar - ric_riemann.del_delbar});

    const ComplexVector br1 = lie_bracket(xi, f.del) - (k * xi + (e - conj(r)) * f.del + s * f.del_bar);
    batch.add("bracket_xi_del", frame_parts(f, br1));
    const ComplexVector br2 =
        lie_bracket(f.del, f.del_bar) - ((r - conj(r)) * xi + conj(b) * f.del - b * f.del_bar);
    batch.add("bracket_del_delbar", frame_parts(f, br2));

    const AcmStructure acm = make_acm(m, f);
    const FormsReport forms = fundamental_forms(acm, at, tol_eff, FormulaInputs{k, sc.omega()});
    {
        IdentityEntry d;
        d.id = "d_eta_formula";
        d.max_residual = forms.d_eta_formula;
        d.tolerance = tol_id;
        d.pass = forms.d_eta_formula <= tol_id;
        IdentityEntry p;
        p.id = "phi_form_formula";
        p.max_residual = forms.phi_formula;
        p.tolerance = tol_id;
        p.pass = forms.phi_formula <= tol_id;
        IdentityResidualReport extra;
        extra.entries = {d, p};

        const HReport h = h_tensor(acm, m, s, k, at);
        IdentityEntry hr;
        hr.id = "h_relation";
        hr.max_residual = h.route_residual;
        hr.tolerance = tol_id;
        hr.pass = h.route_residual <= tol_id;
        extra.entries.push_back(hr);

        const bool geodesic = max_kappa(sc, at) <= tol_eff;
        const std::string kappa_reason = "requires kappa = 0 (max |kappa| exceeds tolerance)";
        const SpinWeightedField sigma_w{s, 2};
        const ComplexField theta(sc.theta());
        const ComplexField omega(sc.omega());
        const auto ric = ric_direct;
        if (geodesic) {
            const ComplexField eth_bar_sigma = eth_bar(sigma_w, sc, f).value;
            const ComplexVector grad_theta = horizontal_gradient(theta, m, f.xi);
            const ComplexVector phi_grad_omega = apply_tensor(acm.phi, horizontal_gradient(omega, m, f.xi));
            const ComplexVector f_sigma = horizontal_field(eth_bar_sigma, f);
            const ComplexVector f_ric = horizontal_field(ric.xi_del, f);
            batch.add("grad_decomposition", frame_parts(f, grad_theta - phi_grad_omega - f_sigma - f_ric));

            const ComplexField div_phi = divergence(phi_grad_omega, m);
            batch.add("div_phi_grad", {div_phi - 4.0 * theta * omega * omega});
            const ComplexField lap = divergence(grad_theta, m);
            batch.add("subelliptic", {lap - 4.0 * omega * omega * theta - divergence(f_sigma, m) -
                                      divergence(f_ric, m)});

            const ComplexVector e2 = complexify(f.e2);
            const ComplexVector e3 = complexify(f.e3);
            const ComplexVector br = lie_bracket(e2, e3) - (2.0 * omega * xi + divergence(e3, m) * e2 -
                                                            divergence(e2, m) * e3);
            batch.add("e2e3_bracket", frame_parts(f, br));
            batch.add("xi_omega", {frame_derivative(omega, Leg::Xi, f) + 2.0 * theta * omega});

            const ComplexField xi_theta = frame_derivative(theta, Leg::Xi, f);
            const ComplexField abs2_sigma(abs2(s));
            batch.add("raychaudhuri_theta",
                      {-xi_theta - (abs2_sigma + theta * theta - omega * omega + 0.5 * ric.xi_xi)});
            batch.add("raychaudhuri_omega", {-frame_derivative(omega, Leg::Xi, f) - 2.0 * theta * omega});
            batch.add("ricci_xi_xi_expansion",
                      {ric.xi_xi - (-2.0 * xi_theta - 2.0 * abs2_sigma - 2.0 * theta * theta + 2.0 * omega * omega)});
            batch.add("ricci_xi_xi_expansion_variant",
                      {ric.xi_xi - (2.0 * xi_theta - 2.0 * abs2_sigma - 2.0 * theta * theta + 2.0 * omega * omega)},
                      true);

            // Forms that assume ∂ρ + ð̄σ = 0, i.e. Ric(ξ,∂) = 0.
            const double b_max = max_abs(sample(ric.xi_del, at)).value;
            if (b_max <= tol_id) {
                batch.add("grad_decomposition_eta_einstein", frame_parts(f, grad_theta - phi_grad_omega - f_sigma));
                batch.add("subelliptic_eta_einstein",
                          {lap - 4.0 * omega * omega * theta - divergence(f_sigma, m)});
            } else {
                const std::string reason = "requires Ric(xi, del) = 0";
                batch.skip("grad_decomposition_eta_einstein", reason);
                batch.skip("subelliptic_eta_einstein", reason);
            }

            // ξβ̄ + ∂̄ε = −β̄(i + ε) − βσ̄ on contact metric inputs with Ric(ξ,∂) = 0.
            const auto om = sample_real(sc.omega(), at);
            const bool contact = std::all_of(om.begin(), om.end(), [&](double w) { return std::abs(w - 1.0) <= tol_eff; });
            if (contact && b_max <= tol_id) {
                batch.add("sachs4_contact_form", {frame_derivative(conj(b), Leg::Xi, f) +
                                                      frame_derivative(e, Leg::DelBar, f) +
                                                      conj(b) * (ComplexField::i() + e) + b * conj(s)});
            } else {
                batch.skip("sachs4_contact_form", "requires contact metric with Ric(xi, del) = 0");
            }
        } else {
            for (const char* id : {"grad_decomposition", "div_phi_grad", "subelliptic", "e2e3_bracket", "xi_omega",
                                   "raychaudhuri_theta", "raychaudhuri_omega", "ricci_xi_xi_expansion",
                                   "grad_decomposition_eta_einstein", "subelliptic_eta_einstein",
                                   "sachs4_contact_form"}) {
                batch.skip(id, kappa_reason);
            }
            batch.skip("ricci_xi_xi_expansion_variant", kappa_reason, true);
        }

        IdentityResidualReport out = batch.run();
        out.append(extra);
        out.append(verify_gauge_covariance(m, f, gauge ? *gauge : default_gauge_angle(), at, tol));
        out.notes.push_back("integral inequalities are not evaluated by quadrature; only their pointwise "
                            "ingredients are checked");
        out.notes.push_back("all statements refer to the sampled points only");
        return out;
    }
}

IdentityResidualReport verify_gauge_covariance(const MetricData& m, const Frame& f, const Expr& t,
                                               const SampleSet& at, double tol)
{
    const SpinCoefficients sc = spin_coefficients(m, f);
    const Frame g = gauge_transform(f, t, m);
    const SpinCoefficients sp = spin_coefficients(m, g);
    const double tol_id = identity_tolerance(sc, at, tol);
    Batch batch(at, tol_id);

    const ComplexField E = expi(t);
    const ComplexField i = ComplexField::i();
    batch.add("gauge_kappa", {sp.kappa - E * sc.kappa});
    batch.add("gauge_rho", {sp.rho - sc.rho});
    batch.add("gauge_sigma", {sp.sigma - E * E * sc.sigma});
    batch.add("gauge_epsilon", {sp.epsilon - (sc.epsilon + i * directional(f.xi, t))});
    batch.add("gauge_beta", {sp.beta - E * (sc.beta + i * directional(f.del, ComplexField(t)))});

    struct Weighted {
        const ComplexField* before;
        const ComplexField* after;
        int s;
    };
    const std::array<Weighted, 3> qs{{{&sc.kappa, &sp.kappa, 1}, {&sc.rho, &sp.rho, 0}, {&sc.sigma, &sp.sigma, 2}}};
    std::vector<ComplexField> p_parts;
    std::vector<ComplexField> eth_parts;
    std::vector<ComplexField> ethbar_parts;
    for (const auto& q : qs) {
        const SpinWeightedField before{*q.before, q.s};
        const SpinWeightedField after{*q.after, q.s};
        p_parts.push_back(thorn(after, sp, g).value - power(E, q.s) * thorn(before, sc, f).value);
        eth_parts.push_back(eth(after, sp, g).value - power(E, q.s + 1) * eth(before, sc, f).value);
        ethbar_parts.push_back(eth_bar(after, sp, g).value - power(E, q.s - 1) * eth_bar(before, sc, f).value);
    }
    batch.add("covariance_P", p_parts);
    batch.add("covariance_eth", eth_parts);
    batch.add("covariance_ethbar", ethbar_parts);
    return batch.run();
}

bool Box::contains(const Point& p) const
{
    for (int i = 0; i < 3; ++i) {
        if (!(p[i] >= lo[i] && p[i] <= hi[i])) {
            return false;
        }
    }
    return true;
}

OrbitReport raychaudhuri_orbit_check(const MetricData& m, const Frame& f, const SpinCoefficients& sc,
                                     const Point& x0, double t0, double t1, int steps, const Box& box,
                                     const ParamTable& params, double tol)
{
    if (steps < 1) {
        throw std::invalid_argument("orbit needs at least one step");
    }
    const ComplexField theta(sc.theta());
    const ComplexField omega(sc.omega());
    const ComplexField ric = ricci_frame_components(m, f).xi_xi;
    const std::vector<Expr> fields{f.xi[0],
                                   f.xi[1],
                                   f.xi[2],
                                   sc.theta(),
                                   sc.omega(),
                                   ric.re,
                                   abs2(sc.sigma),
                                   sqrt(abs2(sc.kappa)),
                                   frame_derivative(theta, Leg::Xi, f).re,
                                   frame_derivative(omega, Leg::Xi, f).re};
    const Program prog(fields, params);
    std::vector<double> v(fields.size());
    std::vector<double> scratch;
    const auto eval = [&](const Point& p) { prog.run(p, v, scratch); };

    using State = std::array<double, 5>;
    const auto rhs = [&](const State& y) {
        eval({y[0], y[1], y[2]});
        const double th = y[3];
        const double om = y[4];
        return State{v[0], v[1], v[2], -(v[6] + th * th - om * om + 0.5 * v[5]), -2.0 * th * om};
    };

    OrbitReport r;
    eval(x0);
    State y{x0[0], x0[1], x0[2], v[3], v[4]};
    const double h = (t1 - t0) / steps;
    double kappa_max = 0.0;
    double res_theta = 0.0;
    double res_omega = 0.0;
    Point worst_theta = x0;
    Point worst_omega = x0;
    double scale = 0.0;
    for (int n = 0;; ++n) {
        const Point x{y[0], y[1], y[2]};
        eval(x);
        OrbitSample s;
        s.t = t0 + n * h;
        s.x = x;
        s.theta = v[3];
        s.omega = v[4];
        s.ric_xi_xi = v[5];
        s.abs_sigma2 = v[6];
        s.theta_ode = y[3];
        s.omega_ode = y[4];
        r.samples.push_back(s);
        kappa_max = std::max(kappa_max, v[7]);
        scale = std::max({scale, std::abs(v[3]), std::abs(v[4]), std::sqrt(v[6]), v[7]});
        const double rt = std::abs(-v[8] - (v[6] + v[3] * v[3] - v[4] * v[4] + 0.5 * v[5]));
        const double ro = std::abs(-v[9] - 2.0 * v[3] * v[4]);
        if (!(rt <= res_theta)) {
            res_theta = rt;
            worst_theta = x;
        }
        if (!(ro <= res_omega)) {
            res_omega = ro;
            worst_omega = x;
        }
        r.cointegration_theta = std::max(r.cointegration_theta, std::abs(s.theta - s.theta_ode));
        r.cointegration_omega = std::max(r.cointegration_omega, std::abs(s.omega - s.omega_ode));
        if (n == steps) {
            break;
        }
        const State k1 = rhs(y);
        State tmp;
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        const State k2 = rhs(tmp);
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        const State k3 = rhs(tmp);
        for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * k3[i];
        const State k4 = rhs(tmp);
        State next;
        for (int i = 0; i < 5; ++i) next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!box.contains({next[0], next[1], next[2]})) {
            r.truncated = true;
            r.warning = "orbit left the domain box at t = " + std::to_string(t0 + (n + 1) * h) + "; truncated";
            break;
        }
        y = next;
    }

    const double tol_eff = tol * (1.0 + scale);
    const double tol_id = tol_eff * (1.0 + scale);
    const auto entry = [&](std::string id, double value, const Point& where) {
        IdentityEntry e;
        e.id = std::move(id);
        e.max_residual = value;
        e.worst = where;
        e.tolerance = tol_id;
        e.pass = value <= tol_id;
        return e;
    };
    if (kappa_max > tol_eff) {
        for (const char* id : {"raychaudhuri_theta", "raychaudhuri_omega"}) {
            IdentityEntry e;
            e.id = id;
            e.skipped = true;
            e.skip_reason = "requires kappa = 0 along the orbit";
            e.tolerance = tol_id;
            r.identities.entries.push_back(e);
        }
    } else {
        r.identities.entries.push_back(entry("raychaudhuri_theta", res_theta, worst_theta));
        r.identities.entries.push_back(entry("raychaudhuri_omega", res_omega, worst_omega));
    }
    if (r.truncated) {
        r.identities.notes.push_back(r.warning);
    }
    return r;
}

}  // namespace acmnp
