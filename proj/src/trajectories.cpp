#include "s2shock/trajectories.hpp"

#include "s2shock/error.hpp"
#include "s2shock/riemann.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace s2shock::trajectories {

namespace odeint = boost::numeric::odeint;

auto TrajectoryPath::at(double q) const -> double
{
    if (s.empty()) raise(ErrorKind::ContractViolation, "empty trajectory");
    if (q <= s.front()) return phi.front();
    if (q >= s.back()) return phi.back();
    const auto it = std::upper_bound(s.begin(), s.end(), q);
    const std::size_t k = static_cast<std::size_t>(it - s.begin()) - 1;
    const double h = s[k + 1] - s[k];
    const double t = (q - s[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * phi[k] + (t3 - 2 * t2 + t) * h * velocity[k] + (-2 * t3 + 3 * t2) * phi[k + 1]
           + (t3 - t2) * h * velocity[k + 1];
}

auto integrate_trajectory(const Velocity& V, double s1, double y0, double s_end, const IntegrateOptions& opt)
    -> TrajectoryPath
{
    if (!(s_end > s1)) raise(ErrorKind::ContractViolation, "integrate_trajectory: s_end must exceed s1");
    if (!(opt.tol > 0.0)) raise(ErrorKind::ContractViolation, "integrate_trajectory: tol must be positive");
    using State = double;
    auto stepper = odeint::make_controlled(opt.tol, opt.tol, odeint::runge_kutta_dopri5<State>());
    auto sys = [&](const State& y, State& dy, double s) { dy = V(s, y); };

    TrajectoryPath p;
    p.s1 = s1;
    p.y0 = y0;
    p.tag = opt.tag;
    State y = y0;
    double s = s1;
    double h = std::min(1e-2, s_end - s1);
    p.s.push_back(s);
    p.phi.push_back(y);
    p.velocity.push_back(V(s, y));
    int rejects = 0;
    while (s < s_end) {
        h = std::min(h, s_end - s);
        if (stepper.try_step(sys, y, s, h) == odeint::fail) {
            if (++rejects > 1000) raise(ErrorKind::DomainError, "integrate_trajectory: step size collapsed");
            continue;
        }
        rejects = 0;
        p.s.push_back(s);
        p.phi.push_back(y);
        p.velocity.push_back(V(s, y));
        if (!std::isfinite(y) || std::abs(y) > opt.escape_box) {
            p.escaped = true;
            break;
        }
    }
    return p;
}

auto growth_certificate(const TrajectoryPath& path, double rate) -> double
{
    double margin = std::numeric_limits<double>::infinity();
    const double a0 = std::abs(path.y0);
    auto check = [&](double s) { margin = std::min(margin, std::abs(path.at(s)) - a0 * std::exp(rate * (s - path.s1))); };
    for (std::size_t k = 0; k + 1 < path.s.size(); ++k) {
        check(0.5 * (path.s[k] + path.s[k + 1]));
        check(path.s[k + 1]);
    }
    return margin;
}

auto weighted_integral(const TrajectoryPath& path, double p) -> double
{
    if (!(p > 0.1 && p < 10.0)) raise(ErrorKind::ContractViolation, "weighted_integral: p must lie in (1/10, 10)");
    auto f = [&](double s) {
        const double y = path.at(s);
        return std::pow(1.0 + y * y, -0.5 * p);
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < path.s.size(); ++k)
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, path.s[k], path.s[k + 1], 8, 1e-13);
    return total;
}

auto weighted_integral_trapezoid(const TrajectoryPath& path, double p, std::size_t n) -> double
{
    if (n < 2) raise(ErrorKind::ContractViolation, "weighted_integral_trapezoid: need n ≥ 2");
    const double a = path.s.front();
    const double b = path.s.back();
    const double h = (b - a) / static_cast<double>(n - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = path.at(a + h * static_cast<double>(i));
        const double v = std::pow(1.0 + y * y, -0.5 * p);
        total += (i == 0 || i + 1 == n) ? 0.5 * v : v;
    }
    return total * h;
}

// ============================================================================
// Frozen fields
// ============================================================================

namespace {

auto lerp_y(const std::vector<double>& ys, const std::vector<double>& v, double y) -> double
{
    if (y <= ys.front()) return v.front();
    if (y >= ys.back()) return v.back();
    const auto it = std::upper_bound(ys.begin(), ys.end(), y);
    const std::size_t k = static_cast<std::size_t>(it - ys.begin()) - 1;
    const double t = (y - ys[k]) / (ys[k + 1] - ys[k]);
    return (1.0 - t) * v[k] + t * v[k + 1];
}

}  // namespace

FrozenField::FrozenField(std::vector<Snapshot> snapshots, double beta2) : snaps_(std::move(snapshots)), beta2_(beta2)
{
    if (snaps_.empty()) raise(ErrorKind::ContractViolation, "FrozenField: no snapshots");
    for (std::size_t i = 0; i < snaps_.size(); ++i) {
        const auto& sn = snaps_[i];
        if (sn.y.size() < 2 || sn.W.size() != sn.y.size() || sn.G_W.size() != sn.y.size() || sn.G_Z.size() != sn.y.size())
            raise(ErrorKind::ContractViolation, "FrozenField: malformed snapshot");
        if (i > 0 && !(sn.s > snaps_[i - 1].s)) raise(ErrorKind::ContractViolation, "FrozenField: snapshots must increase in s");
    }
}

auto FrozenField::blend(double s, double y, bool z_field) const -> double
{
    auto eval = [&](const Snapshot& sn) {
        const double W = lerp_y(sn.y, sn.W, y);
        if (z_field) return 1.5 * y + beta2_ * sn.beta_tau * W + lerp_y(sn.y, sn.G_Z, y);
        return 1.5 * y + sn.beta_tau * W + lerp_y(sn.y, sn.G_W, y);
    };
    if (s <= snaps_.front().s) return eval(snaps_.front());
    if (s >= snaps_.back().s) return eval(snaps_.back());
    auto it = std::upper_bound(snaps_.begin(), snaps_.end(), s, [](double v, const Snapshot& sn) { return v < sn.s; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double t = (s - a.s) / (b.s - a.s);
    return (1.0 - t) * eval(a) + t * eval(b);
}

auto FrozenField::V_W(double s, double y) const -> double { return blend(s, y, false); }

auto FrozenField::V_Z(double s, double y) const -> double { return blend(s, y, true); }

auto make_frozen_field(const RunRecord& rec) -> FrozenField
{
    return {rec.snapshots, riemann::betas(rec.solver.gamma).beta2};
}

auto z_leftward_margin(const FrozenField& field, double beta3, double kappa0) -> ZLeftward
{
    ZLeftward r;
    r.margin = std::numeric_limits<double>::infinity();
    for (const auto& sn : field.snapshots()) {
        const double bound = beta3 * kappa0 * std::exp(0.5 * sn.s);
        for (std::size_t i = 0; i < sn.y.size(); ++i) {
            if (sn.y[i] > bound) continue;
            const double g = -0.5 * bound - field.V_Z(sn.s, sn.y[i]);
            ++r.checked;
            if (g < r.margin) {
                r.margin = g;
                r.worst_s = sn.s;
                r.worst_y = sn.y[i];
            }
        }
    }
    return r;
}

}  // namespace s2shock::trajectories
