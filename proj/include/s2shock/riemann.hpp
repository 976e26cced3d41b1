#pragma once

#include "s2shock/geometry.hpp"

#include <Eigen/Dense>

namespace s2shock::riemann {

using geometry::GeometryFrame;
using geometry::Mat3;
using Vec3 = Eigen::Vector3d;

struct BetaConstants {
    double gamma = 0.0;
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
};

struct PhysVars {
    double V1 = 0.0;
    double V2 = 0.0;
    double S = 0.0;
};

struct RiemannVars {
    double w = 0.0;
    double z = 0.0;
    double a = 0.0;
};

struct SystemMatrices {
    Mat3 D_P;
    Mat3 D_R;
    Mat3 A_P_u1;
    Mat3 A_P_u2;
    Mat3 A_P_u1t;
    Mat3 A_P_u2t;
    Mat3 B;
    Mat3 B_inv;
    Mat3 A_R_u1t;
    Mat3 A_R_u2t;
    /// Forcing with ∂φ/∂u_j written out.
    Vec3 F_P;
    /// Forcing in the expanded coordinate form.
    Vec3 F_P_expanded;
    /// Forcing of the diagonal system, coded term by term.
    Vec3 F_R;
    /// B F_P + (∂̃_t B + A_{R,ũ₂} ∂_{ũ₂}B) P.
    Vec3 F_R_route;
};

auto betas(double gamma) -> BetaConstants;

auto to_riemann(const PhysVars& p, double lambda) -> RiemannVars;
auto to_phys(const RiemannVars& r, double lambda) -> PhysVars;

auto B_matrix(double lambda) -> Mat3;
auto B_inverse(double lambda) -> Mat3;
/// ∂B/∂λ
auto B_lambda_derivative(double lambda) -> Mat3;

auto assemble_matrices(const PhysVars& p, const GeometryFrame& frame, const BetaConstants& b, double psi_dot)
    -> SystemMatrices;

/// ω = φ⁻²[⟨λ⟩∂_{ũ₁}(φa) − ∂_{ũ₂}(φV₁)] written as
/// φ⁻²[φ⟨λ⟩∂_{ũ₁}a − ∂_{ũ₂}(φV₁)] − ⟨λ⟩a·u₁/(2r₀²).
/// The last term vanishes on u₁ = 0 and for a = 0.
auto vorticity(double dA_du1t, double dPhiV1_du2t, const GeometryFrame& frame, double a = 0.0) -> double;

}  // namespace s2shock::riemann
