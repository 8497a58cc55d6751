#include "acmnp/np.hpp"

namespace acmnp {

namespace {

const ComplexField kHalf{0.5};

}  // namespace

SpinCoefficients spin_coefficients(const MetricData& m, const Frame& f)
{
    const ComplexVector xi = complexify(f.xi);
    SpinCoefficients sc;
    sc.kappa = -pair(m, covariant_derivative(xi, xi, m), f.del);
    sc.rho = pair(m, covariant_derivative(xi, f.del_bar, m), f.del);
    sc.sigma = -pair(m, covariant_derivative(xi, f.del, m), f.del);
    sc.epsilon = pair(m, covariant_derivative(f.del, xi, m), f.del_bar);
    sc.beta = pair(m, covariant_derivative(f.del, f.del, m), f.del_bar);
    return sc;
}

ComplexField frame_derivative(const ComplexField& q, Leg dir, const Frame& f)
{
    switch (dir) {
    case Leg::Xi:
        return directional(complexify(f.xi), q);
    case Leg::Del:
        return directional(f.del, q);
    case Leg::DelBar:
        return directional(f.del_bar, q);
    }
    return {};
}

SpinWeightedField thorn(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f)
{
    const double s = q.weight;
    return {frame_derivative(q.value, Leg::Xi, f) - s * sc.epsilon * q.value, q.weight};
}

SpinWeightedField eth(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f)
{
    const double s = q.weight;
    return {frame_derivative(q.value, Leg::Del, f) - s * q.value * sc.beta, q.weight + 1};
}

SpinWeightedField eth_bar(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f)
{
    const double s = q.weight;
    return {frame_derivative(q.value, Leg::DelBar, f) + s * q.value * conj(sc.beta), q.weight - 1};
}

RicciFrame ricci_frame_components(const Matrix3& ricci, const Frame& f)
{
    const ComplexVector xi = complexify(f.xi);
    return {contract2(ricci, xi, xi), contract2(ricci, xi, f.del), contract2(ricci, f.del, f.del),
            contract2(ricci, f.del, f.del_bar)};
}

RicciFrame ricci_frame_components(const MetricData& m, const Frame& f) { return ricci_frame_components(m.ricci, f); }

std::array<ComplexField, 5> sachs_residuals(const MetricData& m, const Frame& f, const SpinCoefficients& sc)
{
    const auto ric = ricci_frame_components(m, f);
    const auto& [k, r, s, e, b] = std::tie(sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta);
    const ComplexField kb = conj(k);
    const ComplexField rb = conj(r);
    const ComplexField bb = conj(b);
    const auto D = [&](const ComplexField& q, Leg l) { return frame_derivative(q, l, f); };

    std::array<ComplexField, 5> out;
    out[0] = -D(r, Leg::Xi) - D(k, Leg::DelBar) -
             (ComplexField(abs2(k)) + ComplexField(abs2(s)) + r * r + k * bb + kHalf * ric.xi_xi);
    out[1] = D(s, Leg::Xi) - D(k, Leg::Del) - (k * k + 2.0 * s * e - s * (r + rb) - k * b + ric.del_del);
    out[2] = -D(r, Leg::Del) - D(s, Leg::DelBar) - (2.0 * s * bb + (r - rb) * k + ric.xi_del);
    out[3] = D(b, Leg::Xi) - D(e, Leg::Del) - (s * (kb - bb) + k * (e + rb) + b * (e - rb) - ric.xi_del);
    out[4] = D(bb, Leg::Del) + D(b, Leg::DelBar) -
             (ComplexField(abs2(s)) - ComplexField(abs2(r)) - 2.0 * ComplexField(abs2(b)) - (r - rb) * e -
              ric.del_delbar + kHalf * ric.xi_xi);
    return out;
}

std::array<ComplexField, 2> bianchi2_residuals(const MetricData& m, const Frame& f, const SpinCoefficients& sc)
{
    const auto ric = ricci_frame_components(m, f);
    const ComplexField& A = ric.xi_xi;
    const ComplexField& B = ric.xi_del;
    const ComplexField& C = ric.del_del;
    const ComplexField& Dd = ric.del_delbar;
    const auto& [k, r, s, e, b] = std::tie(sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta);
    const auto D = [&](const ComplexField& q, Leg l) { return frame_derivative(q, l, f); };

    std::array<ComplexField, 2> out;
    out[0] = D(B, Leg::Xi) - kHalf * D(A, Leg::Del) + D(C, Leg::DelBar) -
             (k * A + (e - conj(r) - 2.0 * r) * B + s * conj(B) - (conj(k) + 2.0 * conj(b)) * C - k * Dd);
    out[1] = D(conj(B), Leg::Del) + D(B, Leg::DelBar) - D(Dd, Leg::Xi) + kHalf * D(A, Leg::Xi) -
             (-(r + conj(r)) * (A - Dd) - conj(s) * C - s * conj(C) - (2.0 * conj(k) + conj(b)) * B -
              (2.0 * k + b) * conj(B));
    return out;
}

std::array<ComplexField, 2> bianchi2_residuals_variant(const MetricData& m, const Frame& f,
                                                       const SpinCoefficients& sc)
{
    const auto ric = ricci_frame_components(m, f);
    const ComplexField& A = ric.xi_xi;
    const ComplexField& B = ric.xi_del;
    const ComplexField& C = ric.del_del;
    const ComplexField& Dd = ric.del_delbar;
    const auto& [k, r, s, e, b] = std::tie(sc.kappa, sc.rho, sc.sigma, sc.epsilon, sc.beta);
    const auto D = [&](const ComplexField& q, Leg l) { return frame_derivative(q, l, f); };

    std::array<ComplexField, 2> out;
    out[0] = D(B, Leg::Xi) - kHalf * D(A, Leg::Del) + D(C, Leg::DelBar) -
             (k * A + (e - 2.0 * conj(r) - r) * B + s * Dd - (conj(k) + 2.0 * conj(b)) * C - k * Dd);
    out[1] = D(conj(B), Leg::Del) + D(B, Leg::DelBar) - D(Dd, Leg::Xi) - kHalf * D(A, Leg::Xi) -
             (-(r + conj(r)) * (A - C) - conj(s) * C - s * Dd - (2.0 * conj(k) + conj(b)) * B -
              (2.0 * k + b) * Dd);
    return out;
}

}  // namespace acmnp
