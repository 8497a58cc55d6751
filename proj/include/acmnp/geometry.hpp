#pragma once

// Metric, Levi-Civita connection and curvature on a single chart.
//
// Curvature convention:
//   R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z,   R(∂_i,∂_j)∂_k = R^l_kij ∂_l,
//   R_kj = R^i_kij,
// so the unit round sphere has positive Ricci curvature.

#include <array>
#include <stdexcept>

#include "acmnp/field.hpp"

namespace acmnp {

using Matrix3 = std::array<std::array<Expr, 3>, 3>;

struct MetricData {
    Matrix3 g;
    Matrix3 adj;  // g_inv = adj / det_g
    Matrix3 g_inv;
    Expr det_g;
    Expr sqrt_det_g;
    std::array<Matrix3, 3> gamma;  // gamma[k][i][j] = Γ^k_ij
    Matrix3 ricci;
    Expr scalar_curv;
};

class MetricError : public std::runtime_error {
public:
    MetricError(const std::string& message, Point where)
        : std::runtime_error(message), where_(where)
    {
    }
    [[nodiscard]] const Point& where() const { return where_; }

private:
    Point where_;
};

// Components ordered g11, g12, g13, g22, g23, g33.
MetricData build_metric(const std::array<Expr, 6>& components);

// Leading principal minors at every point; throws MetricError at the first failure.
void check_positive_definite(const MetricData& m, const SampleSet& at);

// R^l_kij as riemann[l][k][i][j], built independently of MetricData::ricci.
using RiemannTensor = std::array<std::array<Matrix3, 3>, 3>;
RiemannTensor riemann(const MetricData& m);
Matrix3 ricci_from_riemann(const RiemannTensor& r);

// Complex-bilinear g(A, B).
ComplexField pair(const MetricData& m, const ComplexVector& A, const ComplexVector& B);
// Index lowering X_i = g_ij X^j.
ComplexVector lower(const MetricData& m, const ComplexVector& X);
// Tensor contraction T(A, B) for a covariant 2-tensor given in coordinates.
ComplexField contract2(const Matrix3& T, const ComplexVector& A, const ComplexVector& B);

// (∇_A X)^k = A^i ∂_i X^k + A^i X^j Γ^k_ij.
ComplexVector covariant_derivative(const ComplexVector& X, const ComplexVector& along, const MetricData& m);
ComplexVector lie_bracket(const ComplexVector& X, const ComplexVector& Y);
ComplexField divergence(const ComplexVector& X, const MetricData& m);
ComplexVector gradient(const ComplexField& f, const MetricData& m);
// ∇f − ξ(f) ξ for a unit field ξ.
ComplexVector horizontal_gradient(const ComplexField& f, const MetricData& m, const RealVector& xi);
// e2(f) e2 + e3(f) e3.
ComplexVector horizontal_gradient(const ComplexField& f, const RealVector& e2, const RealVector& e3);

}  // namespace acmnp
