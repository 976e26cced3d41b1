#pragma once

#include "s2shock/state.hpp"

#include <functional>
#include <string>
#include <vector>

/// Trajectories dΦ/ds = V(s, Φ) through self-similar transport fields.
namespace s2shock::trajectories {

using Velocity = std::function<double(double s, double y)>;

struct TrajectoryPath {
    double s1 = 0.0;
    double y0 = 0.0;
    std::string tag;
    /// Accepted steps; phi[0] = y0 at s[0] = s1.
    std::vector<double> s;
    std::vector<double> phi;
    std::vector<double> velocity;
    /// True when |Φ| left the escape box before s_end.
    bool escaped = false;

    /// Cubic Hermite dense output.
    auto at(double s_query) const -> double;
    auto s_end() const -> double { return s.back(); }
};

struct IntegrateOptions {
    double tol = 1e-10;
    double escape_box = 1e12;
    std::string tag;
};

/// Adaptive Dormand–Prince integration from (s1, y0) to s_end.
auto integrate_trajectory(const Velocity& V, double s1, double y0, double s_end, const IntegrateOptions& opt = {})
    -> TrajectoryPath;

/// min over the path (after s₁) of |Φ(s)| − |y₀|e^{rate(s−s₁)}.
auto growth_certificate(const TrajectoryPath& path, double rate) -> double;

/// ∫ ⟨Φ(s')⟩^{−p} ds' over the path by Gauss–Kronrod quadrature per step.
auto weighted_integral(const TrajectoryPath& path, double p) -> double;

/// Composite trapezoid rule on n uniform points of the dense path (reference).
auto weighted_integral_trapezoid(const TrajectoryPath& path, double p, std::size_t n) -> double;

/// Transport fields frozen from run snapshots, linear in s between snapshots
/// and linear in y within one.
class FrozenField {
public:
    FrozenField(std::vector<Snapshot> snapshots, double beta2);

    auto V_W(double s, double y) const -> double;
    auto V_Z(double s, double y) const -> double;
    auto s_min() const -> double { return snaps_.front().s; }
    auto s_max() const -> double { return snaps_.back().s; }
    auto snapshots() const -> const std::vector<Snapshot>& { return snaps_; }

private:
    auto blend(double s, double y, bool z_field) const -> double;

    std::vector<Snapshot> snaps_;
    double beta2_ = 0.0;
};

auto make_frozen_field(const RunRecord& rec) -> FrozenField;

struct ZLeftward {
    double margin = 0.0;
    double worst_s = 0.0;
    double worst_y = 0.0;
    std::size_t checked = 0;
};

/// min over snapshot samples with y ≤ β₃κ₀e^{s/2} of −½β₃κ₀e^{s/2} − V_Z(s, y).
auto z_leftward_margin(const FrozenField& field, double beta3, double kappa0) -> ZLeftward;

}  // namespace s2shock::trajectories
