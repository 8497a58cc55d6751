#pragma once

// Adapted frame {ξ, ∂, ∂̄}, its coframe, the almost contact metric
// tensors, gauge rotations and the tensor h = ½ L_ξ φ.
//
// ∂ = (e2 − i e3)/√2 and μ = (θ² + i θ³)/√2, so μ(∂) = 1 and φ∂ = i∂ with
// φ e2 = e3, φ e3 = −e2. Two-forms use (α∧β)(X,Y) = ½(α(X)β(Y) − α(Y)β(X))
// and dη_ij = ½(∂_i η_j − ∂_j η_i).

#include <optional>
#include <string>
#include <vector>

#include "acmnp/geometry.hpp"

namespace acmnp {

struct ReebSpec {
    enum class Kind { Xi, Eta };
    Kind kind = Kind::Xi;
    RealVector components;
};

struct Frame {
    RealVector xi;
    RealVector e2;
    RealVector e3;
    ComplexVector del;
    ComplexVector del_bar;
    // Covector components.
    RealVector eta;
    RealVector theta2;
    RealVector theta3;
    ComplexVector mu;
    ComplexVector mu_bar;
    int orientation = 1;
};

class FrameError : public std::runtime_error {
public:
    FrameError(const std::string& message, Point where) : std::runtime_error(message), where_(where) {}
    [[nodiscard]] const Point& where() const { return where_; }

private:
    Point where_;
};

// `center` selects the Gram–Schmidt seed; `at` is used for the unit and
// nonvanishing checks. orientation = +1 makes (ξ, e2, e3) positively
// oriented for √det g dx∧dy∧dz.
Frame build_frame(const MetricData& m, const ReebSpec& reeb, int orientation, const SampleSet& at,
                  const Point& center);

// Completes a frame from (ξ, e2); coframe by index lowering.
Frame complete_frame(const MetricData& m, RealVector xi, RealVector e2, RealVector e3, int orientation);

// e2' = cos t e2 + sin t e3, e3' = −sin t e2 + cos t e3, i.e. ∂' = e^{it}∂.
Frame gauge_transform(const Frame& f, const Expr& t, const MetricData& m);

struct AcmStructure {
    Frame frame;
    Matrix3 phi;    // φ^i_j as phi[i][j]
    Matrix3 Phi;    // Φ_ij = g(∂_i, φ∂_j)
    Matrix3 d_eta;  // ½ convention
};

AcmStructure make_acm(const MetricData& m, const Frame& f);

// 1-form α, 2-form β: (α∧β)(X,Y,Z) = ⅓(α(X)β(Y,Z) + α(Y)β(Z,X) + α(Z)β(X,Y)).
ComplexField wedge_1_2(const ComplexVector& alpha, const Matrix3& beta, const ComplexVector& X,
                       const ComplexVector& Y, const ComplexVector& Z);

// Values of κ and ω used to check dη = (κμ + κ̄μ̄)∧η − 2iω μ∧μ̄.
struct FormulaInputs {
    ComplexField kappa;
    Expr omega;
};

struct FormsReport {
    std::vector<int> rank;       // per point: 1, 2 or 3
    std::optional<int> uniform;  // empty when the rank varies
    double max_d_eta = 0.0;      // max frame component of dη
    double max_eta_d_eta = 0.0;  // max |η∧dη(ξ,e2,e3)|
    double phi_formula = 0.0;    // max component residual of Φ + 2i μ∧μ̄
    double d_eta_formula = -1.0; // < 0 when no inputs were supplied
};

FormsReport fundamental_forms(const AcmStructure& a, const SampleSet& at, double tol,
                              const std::optional<FormulaInputs>& inputs = std::nullopt);

// Frame components T(X,Y) for all X,Y in {ξ, ∂, ∂̄} as a flat list of nine fields.
std::array<ComplexField, 9> frame_components(const Matrix3& T, const Frame& f);

struct HReport {
    Matrix3 h_lie;                // ½ L_ξ φ as h[i][j]
    Matrix3 h_spin;               // from h(∂) = iσ∂̄ + (i/2)κξ, h(ξ) = 0
    double route_residual = 0.0;  // max |h_lie − h_spin| over components and points
    double matrix_residual = 0.0; // max residual of the (e2,e3) block against (−Im σ, −Re σ; −Re σ, Im σ)
    double eigen_residual = 0.0;  // max | |λ_±| − |σ| |
    double angle_residual = 0.0;  // eigenvector for +|σ| against angle −(γ/2 + π/4) mod π
    std::vector<double> abs_sigma;
    std::vector<std::array<double, 2>> eigenvalues;
};

HReport h_tensor(const AcmStructure& a, const MetricData& m, const ComplexField& sigma, const ComplexField& kappa,
                 const SampleSet& at);

}  // namespace acmnp
