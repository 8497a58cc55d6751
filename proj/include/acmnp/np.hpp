#pragma once

// Spin coefficients of the adapted frame and the structure equations they obey.
//
//   κ = −g(∇_ξ ξ, ∂)    ρ = g(∇_∂̄ ξ, ∂) = Θ + iω    σ = −g(∇_∂ ξ, ∂)
//   ε =  g(∇_ξ ∂, ∂̄)    β = g(∇_∂ ∂, ∂̄)
//
// Under ∂ → e^{iθ}∂ these carry spin weights 1, 0, 2 for κ, ρ, σ; ε and β
// transform inhomogeneously. β here is the connection coefficient, not the
// trans-Sasakian function, which is called beta_s wherever it appears.

#include <array>

#include "acmnp/frame.hpp"

namespace acmnp {

struct SpinCoefficients {
    ComplexField kappa;
    ComplexField rho;
    ComplexField sigma;
    ComplexField epsilon;
    ComplexField beta;

    [[nodiscard]] const Expr& theta() const { return rho.re; }
    [[nodiscard]] const Expr& omega() const { return rho.im; }
};

struct SpinWeightedField {
    ComplexField value;
    int weight = 0;

    [[nodiscard]] SpinWeightedField conjugate() const { return {conj(value), -weight}; }
};

SpinCoefficients spin_coefficients(const MetricData& m, const Frame& f);

enum class Leg { Xi, Del, DelBar };

ComplexField frame_derivative(const ComplexField& q, Leg dir, const Frame& f);

// P q = ξq − sεq,  ðq = ∂q − sqβ,  ð̄q = ∂̄q + sqβ̄.
SpinWeightedField thorn(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f);
SpinWeightedField eth(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f);
SpinWeightedField eth_bar(const SpinWeightedField& q, const SpinCoefficients& sc, const Frame& f);

struct RicciFrame {
    ComplexField xi_xi;
    ComplexField xi_del;
    ComplexField del_del;
    ComplexField del_delbar;
};

RicciFrame ricci_frame_components(const MetricData& m, const Frame& f);
RicciFrame ricci_frame_components(const Matrix3& ricci, const Frame& f);

// LHS − RHS of the five structure equations relating frame derivatives of
// the spin coefficients to Ricci components.
std::array<ComplexField, 5> sachs_residuals(const MetricData& m, const Frame& f, const SpinCoefficients& sc);

// Frame form of the contracted second Bianchi identity, with A = Ric(ξ,ξ),
// B = Ric(ξ,∂), C = Ric(∂,∂), D = Ric(∂,∂̄):
//   ξB − ½∂A + ∂̄C = κA + (ε − ρ̄ − 2ρ)B + σB̄ − (κ̄ + 2β̄)C − κD
//   ∂B̄ + ∂̄B − ξD + ½ξA = −(ρ + ρ̄)(A − D) − σ̄C − σC̄ − (2κ̄ + β̄)B − (2κ + β)B̄
std::array<ComplexField, 2> bianchi2_residuals(const MetricData& m, const Frame& f, const SpinCoefficients& sc);

// Variant with (ε − 2ρ̄ − ρ)B, D in place of B̄ and C̄, A − C in place of
// A − D and −½ξA. Kept as a negative control: it does not vanish in general.
std::array<ComplexField, 2> bianchi2_residuals_variant(const MetricData& m, const Frame& f,
                                                         const SpinCoefficients& sc);

}  // namespace acmnp
