#include "s2shock/riemann.hpp"

#include "s2shock/error.hpp"

#include <cmath>

namespace s2shock::riemann {

auto betas(double gamma) -> BetaConstants
{
    if (!(gamma > 1.0) || !std::isfinite(gamma)) raise(ErrorKind::DomainError, "betas: gamma must exceed 1");
    BetaConstants b;
    b.gamma = gamma;
    b.alpha = 0.5 * (gamma - 1.0);
    b.beta1 = 1.0 / (1.0 + b.alpha);
    b.beta2 = (1.0 - b.alpha) / (1.0 + b.alpha);
    b.beta3 = b.alpha / (1.0 + b.alpha);
    return b;
}

auto to_riemann(const PhysVars& p, double lambda) -> RiemannVars
{
    const double br = std::sqrt(1.0 + lambda * lambda);
    const double vn = (p.V1 - lambda * p.V2) / br;
    return {vn + p.S, vn - p.S, (lambda * p.V1 + p.V2) / br};
}

auto to_phys(const RiemannVars& r, double lambda) -> PhysVars
{
    const double br = std::sqrt(1.0 + lambda * lambda);
    const double vn = 0.5 * (r.w + r.z);
    return {(vn + lambda * r.a) / br, (r.a - lambda * vn) / br, 0.5 * (r.w - r.z)};
}

auto B_matrix(double lambda) -> Mat3
{
    const double il = 1.0 / std::sqrt(1.0 + lambda * lambda);
    Mat3 B;
    B << il, -lambda * il, 1.0, il, -lambda * il, -1.0, lambda * il, il, 0.0;
    return B;
}

auto B_inverse(double lambda) -> Mat3
{
    const double il = 1.0 / std::sqrt(1.0 + lambda * lambda);
    Mat3 Bi;
    Bi << 0.5 * il, 0.5 * il, lambda * il, -0.5 * lambda * il, -0.5 * lambda * il, il, 0.5, -0.5, 0.0;
    return Bi;
}

auto B_lambda_derivative(double lambda) -> Mat3
{
    const double il3 = std::pow(1.0 + lambda * lambda, -1.5);
    Mat3 dB;
    dB << -lambda * il3, -il3, 0.0, -lambda * il3, -il3, 0.0, il3, -lambda * il3, 0.0;
    return dB;
}

auto assemble_matrices(const PhysVars& p, const GeometryFrame& f, const BetaConstants& b, double psi_dot)
    -> SystemMatrices
{
    SystemMatrices m;
    const Mat3 I = Mat3::Identity();
    const double phi_inv = 1.0 / f.phi;
    const double lam = f.lambda;
    const double br = f.lambda_bracket;
    const double u1 = f.u(0);
    const double u2 = f.u(1);
    const double r02 = f.r0 * f.r0;
    const double ut2 = f.u_tilde(1);
    const double g1 = f.g(0);
    const double g2 = f.g(1);
    const double V1 = p.V1;
    const double V2 = p.V2;
    const double S = p.S;

    m.D_P << f.h(0, 0), f.h(1, 0), 0.0, f.h(0, 1), f.h(1, 1), 0.0, 0.0, 0.0, 0.0;
    Mat3 coupling;
    coupling << 0.0, 0.0, -1.0, 0.0, 0.0, -1.0, 0.5, 0.5, 0.0;
    m.D_R = Eigen::Vector3d(f.h(0, 0), f.h(1, 1), 0.0).asDiagonal().toDenseMatrix() + f.h(0, 1) * coupling;

    Mat3 e13;
    e13 << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    Mat3 e23;
    e23 << 0, 0, 0, 0, 0, 1, 0, 1, 0;
    const double c1 = 2.0 * b.beta1 * phi_inv * V1 + g1;
    const double c2 = 2.0 * b.beta1 * phi_inv * V2 + g2;
    const double sk = 2.0 * b.beta3 * phi_inv * S;
    m.A_P_u1 = c1 * I + sk * e13;
    m.A_P_u2 = c2 * I + sk * e23;

    Mat3 e1t;
    e1t << 0, 0, 1, 0, 0, -lam, 1, -lam, 0;
    const double cn = 2.0 * b.beta1 * phi_inv * (V1 - lam * V2) + f.G;
    m.A_P_u1t = cn * I + sk * e1t;
    m.A_P_u2t = m.A_P_u2;

    m.B = B_matrix(lam);
    m.B_inv = B_inverse(lam);

    const RiemannVars r = to_riemann(p, lam);
    const Eigen::Vector3d speeds(r.w + b.beta2 * r.z, b.beta2 * r.w + r.z, b.beta1 * (r.w + r.z));
    m.A_R_u1t = f.J * speeds.asDiagonal().toDenseMatrix() + f.G * I;
    Mat3 e2r;
    e2r << -lam, 0, 1, 0, lam, -1, 0.5, -0.5, 0;
    m.A_R_u2t = c2 * I + (sk / br) * e2r;

    // F_P, metric form with ∂φ/∂u_j = −φ²u_j/(2r₀²).
    const double V_sq = V1 * V1 + V2 * V2;
    const double dphi1 = -f.phi * f.phi * u1 / (2.0 * r02);
    const double dphi2 = -f.phi * f.phi * u2 / (2.0 * r02);
    const double gv = (g1 - 2.0 * b.beta1 * phi_inv * V1) * dphi1 + (g2 - 2.0 * b.beta1 * phi_inv * V2) * dphi2;
    m.F_P << phi_inv * V1 * gv + 2.0 * b.beta1 * phi_inv * phi_inv * V_sq * dphi1,
        phi_inv * V2 * gv + 2.0 * b.beta1 * phi_inv * phi_inv * V_sq * dphi2,
        -2.0 * b.beta3 * phi_inv * phi_inv * S * (V1 * dphi1 + V2 * dphi2);

    const double ug = u1 * (g1 - 2.0 * b.beta1 * phi_inv * V1) + u2 * (g2 - 2.0 * b.beta1 * phi_inv * V2);
    const double uV = u1 * V1 + u2 * V2;
    m.F_P_expanded << -b.beta1 / r02 * u1 * V_sq - f.phi / (2.0 * r02) * V1 * ug,
        -b.beta1 / r02 * u2 * V_sq - f.phi / (2.0 * r02) * V2 * ug, b.beta3 / r02 * uV * S;

    // F_R coded term by term.
    const double geo_n = -b.beta1 / (r02 * br) * V_sq * (u1 - lam * u2) - f.phi * (V1 - lam * V2) / (2.0 * r02 * br) * ug;
    const double geo_t = -b.beta1 / (r02 * br) * V_sq * (lam * u1 + u2) - f.phi * (lam * V1 + V2) / (2.0 * r02 * br) * ug;
    const double src = b.beta3 / r02 * uV * S;
    const double dlam = f.psi;
    const double ibr2 = 1.0 / (br * br);
    const double wz = r.w + r.z;
    const double tw = 2.0 * b.beta1 * phi_inv * (V2 - b.alpha * lam / br * S) + g2;
    const double tz = 2.0 * b.beta1 * phi_inv * (V2 + b.alpha * lam / br * S) + g2;
    const double cross = b.beta3 * phi_inv / br * S * wz;
    m.F_R << geo_n + src + (-tw * r.a + cross) * ibr2 * dlam - r.a * ibr2 * ut2 * psi_dot,
        geo_n - src + (-tz * r.a - cross) * ibr2 * dlam - r.a * ibr2 * ut2 * psi_dot,
        geo_t + c2 * 0.5 * wz * ibr2 * dlam + 0.5 * wz * ibr2 * ut2 * psi_dot;

    const Eigen::Vector3d P(V1, V2, S);
    const Mat3 dB = B_lambda_derivative(lam);
    m.F_R_route = m.B * m.F_P + (ut2 * psi_dot * dB + m.A_R_u2t * (dlam * dB)) * P;
    return m;
}

auto vorticity(double dA_du1t, double dPhiV1_du2t, const GeometryFrame& f, double a) -> double
{
    const double phi_inv = 1.0 / f.phi;
    return phi_inv * phi_inv * (f.phi * f.lambda_bracket * dA_du1t - dPhiV1_du2t) -
           f.lambda_bracket * a * f.u(0) / (2.0 * f.r0 * f.r0);
}

}  // namespace s2shock::riemann
