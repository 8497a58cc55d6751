#include "acmnp/field.hpp"

#include <cmath>

namespace acmnp {

ComplexField operator+(const ComplexField& a, const ComplexField& b) { return {a.re + b.re, a.im + b.im}; }
ComplexField operator-(const ComplexField& a, const ComplexField& b) { return {a.re - b.re, a.im - b.im}; }

ComplexField operator*(const ComplexField& a, const ComplexField& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexField operator/(const ComplexField& a, const ComplexField& b)
{
    if (b.im.is_zero()) {
        return {a.re / b.re, a.im / b.re};
    }
    const Expr d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

ComplexField operator-(const ComplexField& a) { return {-a.re, -a.im}; }

ComplexField& operator+=(ComplexField& a, const ComplexField& b) { return a = a + b; }
ComplexField& operator-=(ComplexField& a, const ComplexField& b) { return a = a - b; }

ComplexField conj(const ComplexField& a) { return {a.re, -a.im}; }
Expr abs2(const ComplexField& a) { return a.re * a.re + a.im * a.im; }
ComplexField expi(const Expr& t) { return {cos(t), sin(t)}; }

ComplexField differentiate(const ComplexField& f, int coord)
{
    return {differentiate(f.re, coord), differentiate(f.im, coord)};
}

ComplexVector complexify(const RealVector& v) { return {ComplexField(v[0]), ComplexField(v[1]), ComplexField(v[2])}; }
ComplexVector conj(const ComplexVector& v) { return {conj(v[0]), conj(v[1]), conj(v[2])}; }

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

ComplexVector operator*(const ComplexField& s, const ComplexVector& v) { return {s * v[0], s * v[1], s * v[2]}; }

Expr directional(const RealVector& X, const Expr& f)
{
    Expr out;
    for (int i = 0; i < 3; ++i) {
        out += X[i] * differentiate(f, i);
    }
    return out;
}

ComplexField directional(const ComplexVector& X, const ComplexField& f)
{
    ComplexField out;
    for (int i = 0; i < 3; ++i) {
        out += X[i] * differentiate(f, i);
    }
    return out;
}

ComplexField contract(const ComplexVector& alpha, const ComplexVector& X)
{
    return alpha[0] * X[0] + alpha[1] * X[1] + alpha[2] * X[2];
}

std::vector<Samples> sample(std::span<const ComplexField> fields, const SampleSet& at)
{
    std::vector<Expr> flat;
    flat.reserve(2 * fields.size());
    for (const auto& f : fields) {
        flat.push_back(f.re);
        flat.push_back(f.im);
    }
    const Program prog(flat, at.params);
    std::vector<Samples> out(fields.size(), Samples(at.points.size()));
    std::vector<double> values(flat.size());
    std::vector<double> scratch;
    for (std::size_t p = 0; p < at.points.size(); ++p) {
        prog.run(at.points[p], values, scratch);
        for (std::size_t k = 0; k < fields.size(); ++k) {
            out[k][p] = {values[2 * k], values[2 * k + 1]};
        }
    }
    return out;
}

Samples sample(const ComplexField& field, const SampleSet& at)
{
    return sample(std::span<const ComplexField>(&field, 1), at).front();
}

std::vector<double> sample_real(const Expr& field, const SampleSet& at)
{
    const Program prog(std::span<const Expr>(&field, 1), at.params);
    std::vector<double> out(at.points.size());
    std::vector<double> scratch;
    for (std::size_t p = 0; p < at.points.size(); ++p) {
        prog.run(at.points[p], std::span<double>(&out[p], 1), scratch);
    }
    return out;
}

MaxAbs max_abs(const Samples& s)
{
    MaxAbs m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double v = std::abs(s[i]);
        if (!(v <= m.value)) {  // NaN propagates as the maximum
            m = {v, i};
        }
    }
    return m;
}

}  // namespace acmnp
