#pragma once

// Complex scalar fields, chart vector fields and grid sampling.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "acmnp/expr.hpp"

namespace acmnp {

struct ComplexField {
    Expr re;
    Expr im;

    ComplexField() = default;
    ComplexField(Expr r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    ComplexField(double r) : re(r) {}           // NOLINT(google-explicit-constructor)
    ComplexField(Expr r, Expr i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexField i() { return {Expr(0.0), Expr(1.0)}; }
};

ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(const ComplexField& a, const ComplexField& b);
ComplexField operator/(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a);
ComplexField& operator+=(ComplexField& a, const ComplexField& b);
ComplexField& operator-=(ComplexField& a, const ComplexField& b);

ComplexField conj(const ComplexField& a);
Expr abs2(const ComplexField& a);
// e^{i t} for a real field t.
ComplexField expi(const Expr& t);
ComplexField differentiate(const ComplexField& f, int coord);

using RealVector = std::array<Expr, 3>;
using ComplexVector = std::array<ComplexField, 3>;

ComplexVector complexify(const RealVector& v);
ComplexVector conj(const ComplexVector& v);
ComplexVector operator+(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator-(const ComplexVector& a, const ComplexVector& b);
ComplexVector operator*(const ComplexField& s, const ComplexVector& v);

// X(f) = X^i d_i f.
Expr directional(const RealVector& X, const Expr& f);
ComplexField directional(const ComplexVector& X, const ComplexField& f);

// Contraction α_i X^i of a covector with a vector.
ComplexField contract(const ComplexVector& alpha, const ComplexVector& X);

struct SampleSet {
    std::vector<Point> points;
    ParamTable params;
};

using Samples = std::vector<std::complex<double>>;

// Values of each field at each point: result[field][point].
std::vector<Samples> sample(std::span<const ComplexField> fields, const SampleSet& at);
Samples sample(const ComplexField& field, const SampleSet& at);
std::vector<double> sample_real(const Expr& field, const SampleSet& at);

struct MaxAbs {
    double value = 0.0;
    std::size_t index = 0;
};

MaxAbs max_abs(const Samples& s);

}  // namespace acmnp
