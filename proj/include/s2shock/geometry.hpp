#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace s2shock::geometry {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

struct SpherePoint {
    Vec3 x;
};

struct StereoCoords {
    Vec2 u;
    double r0 = 1.0;
};

struct RotationState {
    Mat3 O = Mat3::Identity();
    Mat3 Q = Mat3::Zero();
};

/// Auxiliary geometric quantities at one point of the shock-adapted chart.
/// N and T are expressed in the orthonormal frame (E₁, E₂).
struct GeometryFrame {
    Vec2 u_tilde = Vec2::Zero();
    Vec2 u = Vec2::Zero();
    double r0 = 1.0;
    double psi = 0.0;
    double phi = 1.0;
    double lambda = 0.0;
    double lambda_bracket = 1.0;
    double J = 1.0;
    Vec2 N = Vec2(1.0, 0.0);
    Vec2 T = Vec2(0.0, 1.0);
    double thetaN = 0.0;
    double thetaT = 0.0;
    Vec2 g = Vec2::Zero();
    Mat2 h = Mat2::Zero();
    /// g₁ − λg₂ − ½ψ̇ũ₂², the scalar part of the normal transport speed.
    double G = 0.0;
};

auto stereo_project(const SpherePoint& p, double r0) -> StereoCoords;
auto stereo_unproject(const StereoCoords& c) -> SpherePoint;
auto metric_factor(const StereoCoords& c) -> double;

auto shock_coords(const Vec2& u, double psi) -> Vec2;
auto shock_coords_inverse(const Vec2& u_tilde, double psi) -> Vec2;

auto is_skew(const Mat3& Q, double tol = 0.0) -> bool;

auto frame_at(const Vec2& u_tilde, double psi, const Mat3& Q, double psi_dot, double r0) -> GeometryFrame;

/// Exact step Oᵀ(t+dt) = exp(Q dt) Oᵀ followed by re-orthonormalization.
auto rotation_step(const RotationState& state, double dt) -> RotationState;

auto skew_from(double q12, double q13, double q23) -> Mat3;

struct OriginEntry {
    std::string name;
    double analytic = 0.0;
    double numeric = 0.0;
    double error = 0.0;
};

struct OriginTable {
    std::vector<OriginEntry> entries;
    double max_error = 0.0;
    bool pass = false;
};

/// Every quantity of the origin table, analytic vs finite differences of frame_at.
/// Throws DerivationMismatch when `strict` and any entry exceeds `tol`.
auto origin_derivative_table(double psi, const Mat3& Q, double r0, double tol = 1e-6, bool strict = true)
    -> OriginTable;

}  // namespace s2shock::geometry
