#pragma once

#include <array>

/// Stable self-similar Burgers profile W̄ in one and two dimensions.
///
/// The 1D profile is the real root of W + W³ = −y. The 2D profile is the
/// anisotropic lift W̄(y₁,y₂) = ⟨y₂⟩ W̄₁(⟨y₂⟩⁻³ y₁).
namespace s2shock::profile {

struct ProfileEval {
    double value = 0.0;
    std::array<double, 2> grad{};
    std::array<std::array<double, 2>, 2> hessian{};
    /// ∂₁₁₁, ∂₁₁₂, ∂₁₂₂, ∂₂₂₂
    std::array<double, 4> third{};
};

auto w1d(double y) -> double;
auto w1d_deriv(double y, int order) -> double;

auto w2d(double y1, double y2) -> double;
auto w2d_deriv(double y1, double y2, int g1, int g2) -> double;
auto evaluate(double y1, double y2) -> ProfileEval;

auto eta(double y1, double y2, double p) -> double;

/// −½W̄ + (3/2·y₁ + W̄)∂₁W̄ + ½y₂∂₂W̄ from the analytic derivatives.
auto selfsimilar_burgers_residual(double y1, double y2) -> double;

/// Exponent e_γ in |∂^γW̄| ≤ C_γ η^{e_γ}.
auto bound_exponent(int g1, int g2) -> double;

/// Calibrated C_γ for |γ| ≤ 4 (sup of |∂^γW̄|·η^{−e_γ}, rounded up).
auto bound_constant(int g1, int g2) -> double;

}  // namespace s2shock::profile
