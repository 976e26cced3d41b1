#include "s2shock/geometry.hpp"

#include "s2shock/error.hpp"

#include <cmath>
#include <functional>

namespace s2shock::geometry {

auto stereo_project(const SpherePoint& p, double r0) -> StereoCoords
{
    if (!(r0 > 0.0)) raise(ErrorKind::DomainError, "stereo_project: r0 must be positive");
    const double gap = r0 - p.x(2);
    if (gap <= 1e-12 * r0) raise(ErrorKind::ProjectionSingular, "stereo_project: point at the north pole");
    return {Vec2(2.0 * r0 * p.x(0) / gap, 2.0 * r0 * p.x(1) / gap), r0};
}

auto stereo_unproject(const StereoCoords& c) -> SpherePoint
{
    const double phi = metric_factor(c);
    return {Vec3(phi * c.u(0), phi * c.u(1), c.r0 * (1.0 - 2.0 * phi))};
}

auto metric_factor(const StereoCoords& c) -> double
{
    const double r2 = 4.0 * c.r0 * c.r0;
    return r2 / (c.u.squaredNorm() + r2);
}

auto shock_coords(const Vec2& u, double psi) -> Vec2 { return {u(0) - 0.5 * psi * u(1) * u(1), u(1)}; }

auto shock_coords_inverse(const Vec2& u_tilde, double psi) -> Vec2
{
    return {u_tilde(0) + 0.5 * psi * u_tilde(1) * u_tilde(1), u_tilde(1)};
}

auto is_skew(const Mat3& Q, double tol) -> bool { return (Q + Q.transpose()).cwiseAbs().maxCoeff() <= tol; }

auto skew_from(double q12, double q13, double q23) -> Mat3
{
    Mat3 Q;
    Q << 0.0, q12, q13, -q12, 0.0, q23, -q13, -q23, 0.0;
    return Q;
}

auto frame_at(const Vec2& u_tilde, double psi, const Mat3& Q, double psi_dot, double r0) -> GeometryFrame
{
    if (!is_skew(Q, 1e-14)) raise(ErrorKind::ContractViolation, "frame_at: Q must be skew-symmetric");
    GeometryFrame f;
    f.u_tilde = u_tilde;
    f.r0 = r0;
    f.psi = psi;
    f.u = shock_coords_inverse(u_tilde, psi);
    const double u1 = f.u(0);
    const double u2 = f.u(1);
    f.phi = metric_factor({f.u, r0});
    f.lambda = psi * u_tilde(1);
    const double lam = f.lambda;
    const double br = std::sqrt(1.0 + lam * lam);
    f.lambda_bracket = br;
    f.J = br / f.phi;
    f.N = Vec2(1.0, -lam) / br;
    f.T = Vec2(lam, 1.0) / br;

    const double r02 = r0 * r0;
    const double br3 = br * br * br;
    f.thetaN = -(u2 + lam * u1) / (2.0 * r02 * br) + lam * psi / (f.phi * br3);
    f.thetaT = (u1 - lam * u2) / (2.0 * r02 * br) + psi / (f.phi * br3);

    const double radial = Q(0, 2) * u1 + Q(1, 2) * u2;
    const double tail = r0 * (1.0 / f.phi - 2.0);
    for (int i = 0; i < 2; ++i) {
        f.g(i) = -radial * f.u(i) / (2.0 * r0) + Q(i, 0) * u1 + Q(i, 1) * u2 + Q(i, 2) * tail;
    }
    const double diag = radial / (2.0 * r0);
    const double off = Q(0, 1) + (Q(0, 2) * u2 - Q(1, 2) * u1) / (2.0 * r0);
    f.h << diag, off, -off, diag;
    f.G = f.g(0) - lam * f.g(1) - 0.5 * psi_dot * u_tilde(1) * u_tilde(1);
    return f;
}

auto rotation_step(const RotationState& state, double dt) -> RotationState
{
    if (!(dt > 0.0)) raise(ErrorKind::ContractViolation, "rotation_step: dt must be positive");
    if (!is_skew(state.Q)) raise(ErrorKind::ContractViolation, "rotation_step: Q must be skew-symmetric");
    const Mat3 K = state.Q * dt;
    const Vec3 omega(K(2, 1), K(0, 2), K(1, 0));
    const double angle = omega.norm();
    Mat3 expK = Mat3::Identity();
    if (angle > 0.0) {
        const double a = angle < 1e-8 ? 1.0 - angle * angle / 6.0 : std::sin(angle) / angle;
        const double b = angle < 1e-8 ? 0.5 - angle * angle / 24.0 : (1.0 - std::cos(angle)) / (angle * angle);
        expK += a * K + b * K * K;
    }
    RotationState next{state.O * expK.transpose(), state.Q};
    Eigen::JacobiSVD<Mat3> svd(next.O, Eigen::ComputeFullU | Eigen::ComputeFullV);
    next.O = svd.matrixU() * svd.matrixV().transpose();
    return next;
}

// ============================================================================
// Origin table
// ============================================================================

namespace {

using Field = std::function<double(const Vec2&)>;

auto d1(const Field& f, int dir, double h, const Vec2& at) -> double
{
    Vec2 e = Vec2::Zero();
    e(dir) = h;
    return (f(at - 2.0 * e) - 8.0 * f(at - e) + 8.0 * f(at + e) - f(at + 2.0 * e)) / (12.0 * h);
}

auto d2(const Field& f, int dir, double h) -> double
{
    Vec2 e = Vec2::Zero();
    e(dir) = h;
    const Vec2 o = Vec2::Zero();
    return (-f(o - 2.0 * e) + 16.0 * f(o - e) - 30.0 * f(o) + 16.0 * f(o + e) - f(o + 2.0 * e)) / (12.0 * h * h);
}

auto d12(const Field& f, double h) -> double
{
    const Field inner = [&](const Vec2& p) { return d1(f, 1, h, p); };
    return d1(inner, 0, h, Vec2::Zero());
}

}  // namespace

auto origin_derivative_table(double psi, const Mat3& Q, double r0, double tol, bool strict) -> OriginTable
{
    if (!is_skew(Q, 1e-14)) raise(ErrorKind::ContractViolation, "origin_derivative_table: Q must be skew-symmetric");
    const double h = 1e-3 * std::min(1.0, r0);
    const double q12 = Q(0, 1);
    const double q13 = Q(0, 2);
    const double q23 = Q(1, 2);
    const double ir = 1.0 / (2.0 * r0);
    const double ir2 = 1.0 / (2.0 * r0 * r0);

    auto frame = [&](const Vec2& ut) { return frame_at(ut, psi, Q, 0.0, r0); };
    const Field u1 = [&](const Vec2& p) { return frame(p).u(0); };
    const Field u2 = [&](const Vec2& p) { return frame(p).u(1); };
    const Field lam = [&](const Vec2& p) { return frame(p).lambda; };
    const Field u1sq = [&](const Vec2& p) { return std::pow(frame(p).u(0), 2); };
    const Field usq = [&](const Vec2& p) { return frame(p).u.squaredNorm(); };
    const Field phi_inv = [&](const Vec2& p) { return 1.0 / frame(p).phi; };
    const Field br = [&](const Vec2& p) { return frame(p).lambda_bracket; };
    const Field J = [&](const Vec2& p) { return frame(p).J; };
    const Field g1 = [&](const Vec2& p) { return frame(p).g(0); };
    const Field g2 = [&](const Vec2& p) { return frame(p).g(1); };
    const Field gn = [&](const Vec2& p) {
        const auto f = frame(p);
        return f.g(0) - f.lambda * f.g(1);
    };
    const Field h11 = [&](const Vec2& p) { return frame(p).h(0, 0); };
    const Field h12 = [&](const Vec2& p) { return frame(p).h(0, 1); };
    const Vec2 o = Vec2::Zero();

    OriginTable table;
    auto add = [&](const std::string& name, double analytic, double numeric) {
        const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
        table.entries.push_back({name, analytic, numeric, err});
        table.max_error = std::max(table.max_error, err);
    };

    add("d1 u1", 1.0, d1(u1, 0, h, o));
    add("d2 u1", 0.0, d1(u1, 1, h, o));
    add("d22 u1", psi, d2(u1, 1, h));
    add("d2 u2", 1.0, d1(u2, 1, h, o));
    add("d2 lambda", psi, d1(lam, 1, h, o));

    add("d1 u1^2", 0.0, d1(u1sq, 0, h, o));
    add("d11 u1^2", 2.0, d2(u1sq, 0, h));
    add("d2 u1^2", 0.0, d1(u1sq, 1, h, o));
    add("d12 u1^2", 0.0, d12(u1sq, h));
    add("d22 u1^2", 0.0, d2(u1sq, 1, h));

    add("d1 |u|^2", 0.0, d1(usq, 0, h, o));
    add("d2 |u|^2", 0.0, d1(usq, 1, h, o));
    add("d11 |u|^2", 2.0, d2(usq, 0, h));
    add("d12 |u|^2", 0.0, d12(usq, h));
    add("d22 |u|^2", 2.0, d2(usq, 1, h));

    add("phi^-1", 1.0, phi_inv(o));
    add("d1 phi^-1", 0.0, d1(phi_inv, 0, h, o));
    add("d2 phi^-1", 0.0, d1(phi_inv, 1, h, o));
    add("d11 phi^-1", ir2, d2(phi_inv, 0, h));
    add("d22 phi^-1", ir2, d2(phi_inv, 1, h));
    add("d12 phi^-1", 0.0, d12(phi_inv, h));

    add("<lambda>", 1.0, br(o));
    add("d2 <lambda>", 0.0, d1(br, 1, h, o));
    add("d22 <lambda>", psi * psi, d2(br, 1, h));

    add("J", 1.0, J(o));
    add("d1 J", 0.0, d1(J, 0, h, o));
    add("d2 J", 0.0, d1(J, 1, h, o));
    add("d11 J", ir2, d2(J, 0, h));
    add("d12 J", 0.0, d12(J, h));
    add("d22 J", ir2 + psi * psi, d2(J, 1, h));

    add("g1", -r0 * q13, g1(o));
    add("d1 g1", 0.0, d1(g1, 0, h, o));
    add("d2 g1", q12, d1(g1, 1, h, o));
    add("d11 g1", -q13 * ir, d2(g1, 0, h));
    add("d12 g1", -q23 * ir, d12(g1, h));
    add("d22 g1", q13 * ir, d2(g1, 1, h));

    add("g2", -r0 * q23, g2(o));
    add("d1 g2", -q12, d1(g2, 0, h, o));
    add("d2 g2", 0.0, d1(g2, 1, h, o));
    add("d11 g2", q23 * ir, d2(g2, 0, h));
    add("d12 g2", -q13 * ir, d12(g2, h));
    add("d22 g2", -psi * q12 - q23 * ir, d2(g2, 1, h));

    add("g1-lambda g2", -r0 * q13, gn(o));
    add("d1 (g1-lambda g2)", 0.0, d1(gn, 0, h, o));
    add("d2 (g1-lambda g2)", q12 + psi * r0 * q23, d1(gn, 1, h, o));
    add("d11 (g1-lambda g2)", -q13 * ir, d2(gn, 0, h));
    add("d12 (g1-lambda g2)", psi * q12 - q23 * ir, d12(gn, h));
    add("d22 (g1-lambda g2)", q13 * ir, d2(gn, 1, h));

    add("h11", 0.0, h11(o));
    add("h12", q12, h12(o));

    table.pass = table.max_error <= tol;
    if (strict && !table.pass) {
        for (const auto& e : table.entries) {
            if (e.error > tol) {
                raise(ErrorKind::DerivationMismatch,
                      "origin table entry '" + e.name + "' analytic " + std::to_string(e.analytic) + " vs numeric " +
                          std::to_string(e.numeric));
            }
        }
    }
    return table;
}

}  // namespace s2shock::geometry
