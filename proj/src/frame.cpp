#include "acmnp/frame.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace acmnp {

namespace {

constexpr double kUnitTol = 1e-12;

// Sample points plus deterministic interior points of their bounding box, so
// a pass-through decision is not an artifact of lattice alignment.
SampleSet probe_points(const SampleSet& at)
{
    SampleSet probe = at;
    if (at.points.empty()) {
        return probe;
    }
    Point lo = at.points.front();
    Point hi = lo;
    for (const auto& p : at.points) {
        for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    std::mt19937_64 rng(0x5eedULL);
    for (int n = 0; n < 16; ++n) {
        Point p;
        for (int i = 0; i < 3; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p[i] = lo[i] + u * (hi[i] - lo[i]);
        }
        probe.points.push_back(p);
    }
    return probe;
}

bool identically_one(const Expr& e, const SampleSet& probe)
{
    if (e.is_one()) {
        return true;
    }
    for (double v : sample_real(e, probe)) {
        if (!(std::abs(v - 1.0) <= kUnitTol)) {
            return false;
        }
    }
    return true;
}

Expr real_pair(const MetricData& m, const RealVector& a, const RealVector& b)
{
    Expr s;
    for (int i = 0; i < 3; ++i) {
        Expr row;
        for (int j = 0; j < 3; ++j) {
            row += m.g[i][j] * b[j];
        }
        s += a[i] * row;
    }
    return s;
}

RealVector scaled(const RealVector& v, const Expr& s)
{
    return {v[0] * s, v[1] * s, v[2] * s};
}

RealVector real_lower(const MetricData& m, const RealVector& v)
{
    RealVector out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            out[i] += m.g[i][j] * v[j];
        }
    }
    return out;
}

// Unit-normalizes v unless |v|² is identically one on the probe set.
RealVector normalized(const MetricData& m, const RealVector& v, const SampleSet& probe)
{
    const Expr n2 = real_pair(m, v, v);
    if (identically_one(n2, probe)) {
        return v;
    }
    return scaled(v, 1.0 / sqrt(n2));
}

ComplexField form_value(const ComplexVector& alpha, const ComplexVector& X) { return contract(alpha, X); }

// (α∧β)(X,Y) with the ½ convention.
ComplexField wedge11(const ComplexVector& a, const ComplexVector& b, const ComplexVector& X,
                     const ComplexVector& Y)
{
    return 0.5 * (form_value(a, X) * form_value(b, Y) - form_value(a, Y) * form_value(b, X));
}

}  // namespace

Frame complete_frame(const MetricData& m, RealVector xi, RealVector e2, RealVector e3, int orientation)
{
    Frame f;
    f.xi = std::move(xi);
    f.e2 = std::move(e2);
    f.e3 = std::move(e3);
    f.orientation = orientation;
    const ComplexField s = 1.0 / std::numbers::sqrt2;
    const ComplexVector a = complexify(f.e2);
    const ComplexVector b = complexify(f.e3);
    f.del = s * (a - ComplexField::i() * b);
    f.del_bar = s * (a + ComplexField::i() * b);
    f.eta = real_lower(m, f.xi);
    f.theta2 = real_lower(m, f.e2);
    f.theta3 = real_lower(m, f.e3);
    const ComplexVector t2 = complexify(f.theta2);
    const ComplexVector t3 = complexify(f.theta3);
    f.mu = s * (t2 + ComplexField::i() * t3);
    f.mu_bar = s * (t2 - ComplexField::i() * t3);
    return f;
}

Frame build_frame(const MetricData& m, const ReebSpec& reeb, int orientation, const SampleSet& at,
                  const Point& center)
{
    if (orientation != 1 && orientation != -1) {
        throw std::invalid_argument("orientation must be +1 or -1");
    }
    const SampleSet probe = probe_points(at);

    RealVector xi = reeb.components;
    if (reeb.kind == ReebSpec::Kind::Eta) {
        for (int k = 0; k < 3; ++k) {
            xi[k] = Expr();
            for (int l = 0; l < 3; ++l) {
                xi[k] += m.g_inv[k][l] * reeb.components[l];
            }
        }
    }
    const Expr n2 = real_pair(m, xi, xi);
    const auto norms = sample_real(n2, at);
    for (std::size_t p = 0; p < norms.size(); ++p) {
        if (!(norms[p] > 1e-24)) {
            throw FrameError("Reeb field vanishes", at.points[p]);
        }
    }
    xi = normalized(m, xi, probe);

    SampleSet mid{{center}, at.params};
    int seed = -1;
    RealVector v;
    for (int c = 0; c < 3 && seed < 0; ++c) {
        const Expr eta_c = [&] {
            Expr s;
            for (int j = 0; j < 3; ++j) {
                s += m.g[c][j] * xi[j];
            }
            return s;
        }();
        const Expr perp2 = m.g[c][c] - eta_c * eta_c;
        if (sample_real(perp2, mid).front() > 1e-16) {
            seed = c;
            for (int k = 0; k < 3; ++k) {
                v[k] = Expr(k == c ? 1.0 : 0.0) - eta_c * xi[k];
            }
        }
    }
    if (seed < 0) {
        throw FrameError("every coordinate field is parallel to the Reeb field", center);
    }
    const RealVector e2 = normalized(m, v, probe);

    // Lowered cross product w_l = ε_ijl ξ^i e2^j, raised with the adjugate.
    RealVector w;
    for (int l = 0; l < 3; ++l) {
        const int i = (l + 1) % 3;
        const int j = (l + 2) % 3;
        w[l] = xi[i] * e2[j] - xi[j] * e2[i];
    }
    RealVector e3;
    const bool unit_volume = identically_one(m.det_g, probe);
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            e3[k] += (unit_volume ? m.adj[k][l] : m.adj[k][l] / m.sqrt_det_g) * w[l];
        }
        if (orientation < 0) {
            e3[k] = -e3[k];
        }
    }
    return complete_frame(m, xi, e2, e3, orientation);
}

Frame gauge_transform(const Frame& f, const Expr& t, const MetricData& m)
{
    const Expr c = cos(t);
    const Expr s = sin(t);
    RealVector e2;
    RealVector e3;
    for (int k = 0; k < 3; ++k) {
        e2[k] = c * f.e2[k] + s * f.e3[k];
        e3[k] = c * f.e3[k] - s * f.e2[k];
    }
    return complete_frame(m, f.xi, e2, e3, f.orientation);
}

AcmStructure make_acm(const MetricData& m, const Frame& f)
{
    (void)m;
    AcmStructure a;
    a.frame = f;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            a.phi[i][j] = f.e3[i] * f.theta2[j] - f.e2[i] * f.theta3[j];
            a.Phi[i][j] = f.theta3[i] * f.theta2[j] - f.theta2[i] * f.theta3[j];
            a.d_eta[i][j] = 0.5 * (differentiate(f.eta[j], i) - differentiate(f.eta[i], j));
        }
    }
    return a;
}

ComplexField wedge_1_2(const ComplexVector& alpha, const Matrix3& beta, const ComplexVector& X,
                       const ComplexVector& Y, const ComplexVector& Z)
{
    return (1.0 / 3.0) * (form_value(alpha, X) * contract2(beta, Y, Z) + form_value(alpha, Y) * contract2(beta, Z, X) +
                          form_value(alpha, Z) * contract2(beta, X, Y));
}

std::array<ComplexField, 9> frame_components(const Matrix3& T, const Frame& f)
{
    const std::array<ComplexVector, 3> legs{complexify(f.xi), f.del, f.del_bar};
    std::array<ComplexField, 9> out;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            out[3 * a + b] = contract2(T, legs[a], legs[b]);
        }
    }
    return out;
}

FormsReport fundamental_forms(const AcmStructure& a, const SampleSet& at, double tol,
                              const std::optional<FormulaInputs>& inputs)
{
    const Frame& f = a.frame;
    const ComplexVector xi = complexify(f.xi);
    const ComplexVector e2 = complexify(f.e2);
    const ComplexVector e3 = complexify(f.e3);
    const ComplexVector eta = complexify(f.eta);
    const std::array<ComplexVector, 3> legs{xi, f.del, f.del_bar};

    std::vector<ComplexField> fields{contract2(a.d_eta, e2, e3), contract2(a.d_eta, xi, e2),
                                     contract2(a.d_eta, xi, e3), wedge_1_2(eta, a.d_eta, xi, e2, e3)};
    for (const auto& X : legs) {
        for (const auto& Y : legs) {
            const ComplexField mm = wedge11(f.mu, f.mu_bar, X, Y);
            fields.push_back(contract2(a.Phi, X, Y) + 2.0 * ComplexField::i() * mm);
        }
    }
    if (inputs) {
        const ComplexVector lead = inputs->kappa * f.mu + conj(inputs->kappa) * f.mu_bar;
        for (const auto& X : legs) {
            for (const auto& Y : legs) {
                const ComplexField rhs = wedge11(lead, eta, X, Y) -
                                         2.0 * ComplexField::i() * inputs->omega * wedge11(f.mu, f.mu_bar, X, Y);
                fields.push_back(contract2(a.d_eta, X, Y) - rhs);
            }
        }
    }
    const auto s = sample(fields, at);

    FormsReport r;
    r.rank.resize(at.points.size());
    for (std::size_t p = 0; p < at.points.size(); ++p) {
        const double d = std::max({std::abs(s[0][p]), std::abs(s[1][p]), std::abs(s[2][p])});
        const double w = std::abs(s[3][p]);
        r.max_d_eta = std::max(r.max_d_eta, d);
        r.max_eta_d_eta = std::max(r.max_eta_d_eta, w);
        // 3|η∧dη(ξ,e2,e3)| = |dη(e2,e3)|, so both tests compare like magnitudes.
        r.rank[p] = d <= tol ? 1 : (3.0 * w > tol ? 3 : 2);
    }
    for (std::size_t k = 4; k < 13; ++k) {
        r.phi_formula = std::max(r.phi_formula, max_abs(s[k]).value);
    }
    if (inputs) {
        r.d_eta_formula = 0.0;
        for (std::size_t k = 13; k < 22; ++k) {
            r.d_eta_formula = std::max(r.d_eta_formula, max_abs(s[k]).value);
        }
    }
    if (!r.rank.empty() && std::all_of(r.rank.begin(), r.rank.end(), [&](int k) { return k == r.rank.front(); })) {
        r.uniform = r.rank.front();
    }
    return r;
}

HReport h_tensor(const AcmStructure& a, const MetricData& m, const ComplexField& sigma, const ComplexField& kappa,
                 const SampleSet& at)
{
    (void)m;
    const Frame& f = a.frame;
    HReport r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Expr l = directional(f.xi, a.phi[i][j]);
            for (int k = 0; k < 3; ++k) {
                l += a.phi[i][k] * differentiate(f.xi[k], j) - a.phi[k][j] * differentiate(f.xi[i], k);
            }
            r.h_lie[i][j] = 0.5 * l;
        }
    }
    const ComplexField half_i{Expr(), Expr(0.5)};
    const ComplexVector h_del = (ComplexField::i() * sigma) * f.del_bar + (half_i * kappa) * complexify(f.xi);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.h_spin[i][j] = 2.0 * (h_del[i] * f.mu[j]).re;
        }
    }

    std::vector<ComplexField> fields;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            fields.emplace_back(r.h_lie[i][j] - r.h_spin[i][j]);
        }
    }
    // Block M_ab = θ^a(h e_b) from the Lie-derivative route.
    const std::array<const RealVector*, 2> e{&f.e2, &f.e3};
    const std::array<const RealVector*, 2> th{&f.theta2, &f.theta3};
    for (int aa = 0; aa < 2; ++aa) {
        for (int bb = 0; bb < 2; ++bb) {
            Expr s;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    s += (*th[aa])[i] * r.h_lie[i][j] * (*e[bb])[j];
                }
            }
            fields.emplace_back(s);
        }
    }
    fields.push_back(sigma);
    const auto s = sample(fields, at);

    for (std::size_t k = 0; k < 9; ++k) {
        r.route_residual = std::max(r.route_residual, max_abs(s[k]).value);
    }
    for (std::size_t p = 0; p < at.points.size(); ++p) {
        const double m00 = s[9][p].real();
        const double m01 = s[10][p].real();
        const double m10 = s[11][p].real();
        const double m11 = s[12][p].real();
        const std::complex<double> sg = s[13][p];
        const double expect[4] = {-sg.imag(), -sg.real(), -sg.real(), sg.imag()};
        const double got[4] = {m00, m01, m10, m11};
        for (int k = 0; k < 4; ++k) {
            r.matrix_residual = std::max(r.matrix_residual, std::abs(got[k] - expect[k]));
        }
        const double abs_sigma = std::abs(sg);
        // Symmetric part; the antisymmetric part is part of matrix_residual.
        const double p00 = m00;
        const double p11 = m11;
        const double p01 = 0.5 * (m01 + m10);
        const double half_tr = 0.5 * (p00 + p11);
        const double rad = std::hypot(0.5 * (p00 - p11), p01);
        const std::array<double, 2> lam{half_tr + rad, half_tr - rad};
        r.eigenvalues.push_back(lam);
        r.abs_sigma.push_back(abs_sigma);
        r.eigen_residual = std::max({r.eigen_residual, std::abs(lam[0] - abs_sigma), std::abs(lam[1] + abs_sigma)});
        if (abs_sigma > 1e-6) {
            const double psi = 0.5 * std::atan2(2.0 * p01, p00 - p11);
            const double gamma = std::arg(sg);
            const double expect_angle = -(0.5 * gamma + 0.25 * std::numbers::pi);
            double diff = std::remainder(psi - expect_angle, std::numbers::pi);
            r.angle_residual = std::max(r.angle_residual, std::abs(diff));
        }
    }
    return r;
}

}  // namespace acmnp
