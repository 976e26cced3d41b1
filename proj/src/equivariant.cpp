#include "s2shock/equivariant.hpp"

#include "s2shock/diagnostics.hpp"
#include "s2shock/error.hpp"
#include "s2shock/modulation.hpp"
#include "s2shock/profile.hpp"
#include "s2shock/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace s2shock::equivariant {

using numerics::kJetSize;
using numerics::Taylor;

namespace {

constexpr std::array<std::array<double, kJetSize>, kJetSize> kBinom = {{
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
}};

// Smooth cutoff: 1 on |θ| ≤ r1, 0 on |θ| ≥ r2.
auto bump_jet(double theta, double r1, double r2) -> Taylor
{
    const double a = std::abs(theta);
    if (a <= r1) return Taylor::constant(1.0);
    if (a >= r2) return Taylor::constant(0.0);
    const double width = r2 - r1;
    const double sign = theta > 0.0 ? 1.0 : -1.0;
    const Taylor x = Taylor::variable((r2 - a) / width, -sign / width);
    const Taylor one = Taylor::constant(1.0);
    const Taylor e1 = numerics::exp(-1.0 * numerics::reciprocal(x));
    const Taylor e2 = numerics::exp(-1.0 * numerics::reciprocal(one - x));
    return e1 * numerics::reciprocal(e1 + e2);
}

// Derivatives 0..4 at ξ of the degree-5 interpolant through 6 uniform samples.
struct Fornberg6 {
    std::array<std::array<double, 6>, kJetSize> c{};
};

auto fornberg6(double xi) -> Fornberg6
{
    Fornberg6 out;
    auto& c = out.c;
    double c1 = 1.0;
    double c4 = 0.0 - xi;
    c[0][0] = 1.0;
    for (int i = 1; i < 6; ++i) {
        const int mn = std::min(i, 4);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = i - xi;
        for (int j = 0; j < i; ++j) {
            const double c3 = i - j;
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return out;
}

void with_ghosts(const std::vector<double>& f, std::vector<double>& out)
{
    const std::size_t n = f.size();
    out.resize(n + 6);
    for (int g = 0; g < 3; ++g) {
        out[g] = f.front();
        out[n + 3 + g] = f.back();
    }
    std::copy(f.begin(), f.end(), out.begin() + 3);
}

auto tan_at(double x, bool flat) -> std::array<double, kJetSize>
{
    if (flat) return {0.0, 0.0, 0.0, 0.0, 0.0};
    return numerics::tan_jet(x);
}

void check_pole(const EquivariantState& st, const SolverConfig& cfg)
{
    if (cfg.flat_mode) return;
    const double limit = std::numbers::pi / 2.0 - cfg.pole_margin;
    auto far = [&](double th) { return std::abs(th + st.xi_frame) > limit; };
    if (far(st.grid.front()) || far(st.grid.back()))
        raise(ErrorKind::PoleSingularity, "grid reaches the pole margin");
    if (!st.nodes.theta.empty() && (far(st.nodes.theta.front()) || far(st.nodes.theta.back())))
        raise(ErrorKind::PoleSingularity, "nodes reach the pole margin");
}

// Transport of z on the grid (shared by both schemes).
void z_rhs(const EquivariantState& st, double c, const BetaConstants& b, const SolverConfig& cfg,
           std::vector<double>& dz)
{
    const std::size_t n = st.grid.size();
    std::vector<double> ghost;
    std::vector<double> dm;
    std::vector<double> dp;
    with_ghosts(st.z, ghost);
    numerics::weno5_derivatives(ghost, st.dtheta, dm, dp);
    dz.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = b.beta2 * st.w[i] + st.z[i] - c;
        const double grad = a > 0.0 ? dm[i] : dp[i];
        const double t = cfg.flat_mode ? 0.0 : std::tan(st.grid[i] + st.xi_frame);
        dz[i] = -a * grad + 0.5 * b.beta3 * (st.z[i] * st.z[i] - st.w[i] * st.w[i]) * t;
    }
}

struct LagVec {
    std::vector<double> theta;
    std::array<std::vector<double>, kJetSize> q;
    std::vector<double> z;
    double xi = 0.0;
};

auto lag_derivative(const EquivariantState& st, double c, const BetaConstants& b, const SolverConfig& cfg) -> LagVec
{
    const auto& nd = st.nodes;
    const std::size_t n = nd.size();
    LagVec d;
    d.theta.resize(n);
    for (auto& v : d.q) v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto T = tan_at(nd.theta[i] + st.xi_frame, cfg.flat_mode);
        std::array<double, kJetSize> q{};
        std::array<double, kJetSize> zj{};
        for (int k = 0; k < kJetSize; ++k) {
            q[k] = nd.w[k][i];
            zj[k] = nd.z[k][i];
        }
        std::array<double, kJetSize> h{};
        for (int k = 0; k < kJetSize; ++k)
            for (int j = 0; j <= k; ++j) h[k] += kBinom[k][j] * (q[j] * q[k - j] - zj[j] * zj[k - j]);
        std::array<double, kJetSize> a{};
        a[0] = q[0] + b.beta2 * zj[0] - c;
        for (int k = 1; k < kJetSize; ++k) a[k] = q[k] + b.beta2 * zj[k];
        d.theta[i] = a[0];
        for (int k = 0; k < kJetSize; ++k) {
            double f = 0.0;
            for (int j = 0; j <= k; ++j) f += kBinom[k][j] * T[j] * h[k - j];
            f *= 0.5 * b.beta3;
            for (int j = 1; j <= k; ++j) f -= kBinom[k][j] * a[j] * q[k - j + 1];
            d.q[k][i] = f;
        }
    }
    z_rhs(st, c, b, cfg, d.z);
    d.xi = c;
    return d;
}

void lag_axpy(EquivariantState& out, const EquivariantState& base, const LagVec& d, double h)
{
    const std::size_t n = base.nodes.size();
    for (std::size_t i = 0; i < n; ++i) out.nodes.theta[i] = base.nodes.theta[i] + h * d.theta[i];
    for (int k = 0; k < kJetSize; ++k)
        for (std::size_t i = 0; i < n; ++i) out.nodes.w[k][i] = base.nodes.w[k][i] + h * d.q[k][i];
    for (std::size_t i = 0; i < base.z.size(); ++i) out.z[i] = base.z[i] + h * d.z[i];
    out.xi_frame = base.xi_frame + h * d.xi;
}

}  // namespace

// ============================================================================
// Configuration and initial data
// ============================================================================

void validate(const SolverConfig& cfg)
{
    auto fail = [](const std::string& m) { raise(ErrorKind::ConfigError, m); };
    if (!(cfg.gamma > 1.0)) fail("solver.gamma must exceed 1");
    if (!(cfg.tau0 > 0.0 && cfg.tau0 < 1.0)) fail("solver.tau0 must lie in (0, 1)");
    if (!(cfg.sigma_inf > 0.0)) fail("solver.sigma_inf must be positive");
    if (cfg.n_cells < 32) fail("solver.n_cells must be at least 32");
    if (cfg.n_nodes < 0) fail("solver.n_nodes must be non-negative");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) fail("solver.cfl must lie in (0, 1]");
    if (!(cfg.jet_cfl > 0.0 && cfg.jet_cfl <= 0.5)) fail("solver.jet_cfl must lie in (0, 0.5]");
    if (!(cfg.dt_floor > 0.0)) fail("solver.dt_floor must be positive");
    if (cfg.record_every < 1) fail("solver.record_every must be at least 1");
    if (!(cfg.plateau() < cfg.support())) fail("solver: plateau must be narrower than the support");
    if (!(cfg.support() < cfg.half_width())) fail("solver: support window exceeds the grid");
    if (cfg.enforce_regime && !cfg.flat_mode) {
        const double pi = std::numbers::pi;
        if (cfg.xi0 < pi / 16.0 - 1e-15 || cfg.xi0 > pi / 8.0 + 1e-15) fail("solver.xi0 must lie in [pi/16, pi/8]");
        const auto b = riemann::betas(cfg.gamma);
        const double bound = std::cbrt(cfg.xi0) / (2.0 * b.beta3);
        if (!(cfg.sigma_inf > bound))
            fail("solver.sigma_inf must exceed xi0^(1/3)/(2 beta3) = " + std::to_string(bound));
    }
}

auto initial_w_jet(const SolverConfig& cfg, double theta) -> std::array<double, kJetSize>
{
    std::array<double, kJetSize> out{};
    const double r1 = cfg.plateau();
    const double r2 = 0.95 * cfg.support();
    switch (cfg.initial) {
    case InitialKind::Steady:
        out[0] = cfg.sigma_inf;
        return out;
    case InitialKind::Dip: {
        const Taylor chi = bump_jet(theta, r1, r2);
        for (int k = 0; k < kJetSize; ++k) out[k] = -cfg.dip_amplitude * cfg.sigma_inf * chi.derivative(k);
        out[0] += cfg.sigma_inf;
        return out;
    }
    case InitialKind::Profile: {
        const double s0 = -std::log(cfg.tau0);
        const double stretch = std::exp(1.5 * s0);
        const double amp = std::exp(-0.5 * s0);
        const double y = theta * stretch;
        Taylor W;
        W.c[0] = amp * profile::w1d(y);
        double scale = 1.0;
        const std::array<double, kJetSize> fact = {1.0, 1.0, 2.0, 6.0, 24.0};
        for (int k = 1; k < kJetSize; ++k) {
            scale *= stretch;
            W.c[k] = amp * profile::w1d_deriv(y, k) * scale / fact[k];
        }
        const Taylor w = W * bump_jet(theta, r1, r2);
        for (int k = 0; k < kJetSize; ++k) out[k] = w.derivative(k);
        out[0] += cfg.kappa0();
        return out;
    }
    }
    return out;
}

auto initial_data(const SolverConfig& cfg) -> EquivariantState
{
    validate(cfg);
    EquivariantState st;
    st.scheme = cfg.scheme;
    st.sigma_inf = cfg.sigma_inf;
    st.xi_frame = cfg.xi0;
    const int n = cfg.n_cells;
    const double half = cfg.half_width();
    st.theta_min = -half;
    st.dtheta = 2.0 * half / n;
    st.grid.resize(n);
    for (int i = 0; i < n; ++i) st.grid[i] = st.theta_min + (i + 0.5) * st.dtheta;
    st.z.assign(n, -cfg.sigma_inf);
    st.w.resize(n);
    for (int i = 0; i < n; ++i) st.w[i] = initial_w_jet(cfg, st.grid[i])[0];

    if (cfg.scheme == Scheme::Lagrangian) {
        const int m = cfg.node_count();
        st.nodes.resize(m);
        const double core = std::pow(cfg.tau0, 1.5);
        const double a = cfg.node_grading && half > core ? std::asinh(half / core) : 0.0;
        for (int i = 0; i < m; ++i) {
            const double zeta = -1.0 + (2.0 * i + 1.0) / m;
            const double th = a > 0.0 ? core * std::sinh(a * zeta) : half * zeta;
            st.nodes.theta[i] = th;
            const auto jet = initial_w_jet(cfg, th);
            for (int k = 0; k < kJetSize; ++k) st.nodes.w[k][i] = jet[k];
        }
    }
    sync(st);
    check_pole(st, cfg);
    return st;
}

// ============================================================================
// Sync
// ============================================================================

void sync(EquivariantState& st)
{
    const std::size_t ng = st.grid.size();
    if (st.scheme == Scheme::Eulerian) {
        st.nodes.theta = st.grid;
        st.nodes.w[0] = st.w;
        st.nodes.z[0] = st.z;
        const auto dw = numerics::centered_derivatives(st.w, st.dtheta);
        const auto dz = numerics::centered_derivatives(st.z, st.dtheta);
        for (int k = 1; k < kJetSize; ++k) {
            st.nodes.w[k] = dw[k - 1];
            st.nodes.z[k] = dz[k - 1];
        }
        return;
    }

    auto& nd = st.nodes;
    const std::size_t n = nd.size();
    // w on the grid by quintic Hermite between bracketing nodes.
    std::size_t k = 0;
    for (std::size_t i = 0; i < ng; ++i) {
        const double x = st.grid[i];
        while (k + 1 < n && nd.theta[k + 1] <= x) ++k;
        if (x <= nd.theta.front()) {
            st.w[i] = nd.w[0].front();
        } else if (k + 1 >= n) {
            st.w[i] = nd.w[0].back();
        } else {
            const std::array<double, 3> d0 = {nd.w[0][k], nd.w[1][k], nd.w[2][k]};
            const std::array<double, 3> d1 = {nd.w[0][k + 1], nd.w[1][k + 1], nd.w[2][k + 1]};
            st.w[i] = numerics::hermite(nd.theta[k], nd.theta[k + 1], d0, d1, x)[0];
        }
    }
    // z jets at the nodes from the degree-5 grid interpolant.
    std::array<double, kJetSize> inv_pow{};
    for (int j = 0; j < kJetSize; ++j) inv_pow[j] = std::pow(st.dtheta, -j);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (nd.theta[j] - st.theta_min) / st.dtheta - 0.5;
        if (u <= 0.0 || u >= static_cast<double>(ng - 1)) {
            nd.z[0][j] = u <= 0.0 ? st.z.front() : st.z.back();
            for (int q = 1; q < kJetSize; ++q) nd.z[q][j] = 0.0;
            continue;
        }
        const long i0 = static_cast<long>(std::floor(u));
        const long start = std::clamp<long>(i0 - 2, 0, static_cast<long>(ng) - 6);
        const auto w = fornberg6(u - static_cast<double>(start));
        for (int q = 0; q < kJetSize; ++q) {
            double acc = 0.0;
            for (int p = 0; p < 6; ++p) acc += w.c[q][p] * st.z[start + p];
            nd.z[q][j] = acc * inv_pow[q];
        }
    }
}

// ============================================================================
// Right-hand side and stepping
// ============================================================================

auto rhs(const EquivariantState& st, double frame_speed, const BetaConstants& b, const SolverConfig& cfg) -> Rhs
{
    check_pole(st, cfg);
    Rhs r;
    const std::size_t n = st.grid.size();
    std::vector<double> ghost;
    std::vector<double> dm;
    std::vector<double> dp;
    with_ghosts(st.w, ghost);
    numerics::weno5_derivatives(ghost, st.dtheta, dm, dp);
    r.dw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = st.w[i] + b.beta2 * st.z[i] - frame_speed;
        const double grad = a > 0.0 ? dm[i] : dp[i];
        const double t = cfg.flat_mode ? 0.0 : std::tan(st.grid[i] + st.xi_frame);
        r.dw[i] = -a * grad + 0.5 * b.beta3 * (st.w[i] * st.w[i] - st.z[i] * st.z[i]) * t;
    }
    z_rhs(st, frame_speed, b, cfg, r.dz);
    return r;
}

auto max_dt(const EquivariantState& st, double frame_speed, const BetaConstants& b, const SolverConfig& cfg) -> double
{
    double speed = 1e-300;
    for (std::size_t i = 0; i < st.grid.size(); ++i) {
        speed = std::max(speed, std::abs(b.beta2 * st.w[i] + st.z[i] - frame_speed));
        if (st.scheme == Scheme::Eulerian) speed = std::max(speed, std::abs(st.w[i] + b.beta2 * st.z[i] - frame_speed));
    }
    const double slope = max_slope(st);
    double dt = cfg.cfl * st.dtheta / speed;
    if (slope > 0.0) dt = std::min(dt, cfg.jet_cfl / slope);
    return dt;
}

auto step(const EquivariantState& st, double frame_speed, double dt, const BetaConstants& b, const SolverConfig& cfg)
    -> EquivariantState
{
    if (!(dt > 0.0)) raise(ErrorKind::ContractViolation, "step: dt must be positive");
    const double limit = max_dt(st, frame_speed, b, cfg);
    if (dt > limit * (1.0 + 1e-12)) raise(ErrorKind::ContractViolation, "step: dt exceeds the CFL limit");
    check_pole(st, cfg);
    const double c = frame_speed;

    if (st.scheme == Scheme::Eulerian) {
        auto stage = [&](const EquivariantState& base, const Rhs& k, double h) {
            EquivariantState s = base;
            for (std::size_t i = 0; i < s.w.size(); ++i) {
                s.w[i] += h * k.dw[i];
                s.z[i] += h * k.dz[i];
            }
            s.xi_frame += h * c;
            return s;
        };
        const Rhs k1 = rhs(st, c, b, cfg);
        const auto s2 = stage(st, k1, 0.5 * dt);
        const Rhs k2 = rhs(s2, c, b, cfg);
        const auto s3 = stage(st, k2, 0.5 * dt);
        const Rhs k3 = rhs(s3, c, b, cfg);
        const auto s4 = stage(st, k3, dt);
        const Rhs k4 = rhs(s4, c, b, cfg);
        EquivariantState out = st;
        for (std::size_t i = 0; i < out.w.size(); ++i) {
            out.w[i] += dt / 6.0 * (k1.dw[i] + 2.0 * k2.dw[i] + 2.0 * k3.dw[i] + k4.dw[i]);
            out.z[i] += dt / 6.0 * (k1.dz[i] + 2.0 * k2.dz[i] + 2.0 * k3.dz[i] + k4.dz[i]);
        }
        out.xi_frame += dt * c;
        out.t_tilde += dt;
        sync(out);
        return out;
    }

    const LagVec k1 = lag_derivative(st, c, b, cfg);
    EquivariantState tmp = st;
    lag_axpy(tmp, st, k1, 0.5 * dt);
    sync(tmp);
    const LagVec k2 = lag_derivative(tmp, c, b, cfg);
    lag_axpy(tmp, st, k2, 0.5 * dt);
    sync(tmp);
    const LagVec k3 = lag_derivative(tmp, c, b, cfg);
    lag_axpy(tmp, st, k3, dt);
    sync(tmp);
    const LagVec k4 = lag_derivative(tmp, c, b, cfg);

    EquivariantState out = st;
    const double w6 = dt / 6.0;
    const std::size_t n = st.nodes.size();
    for (std::size_t i = 0; i < n; ++i)
        out.nodes.theta[i] += w6 * (k1.theta[i] + 2.0 * k2.theta[i] + 2.0 * k3.theta[i] + k4.theta[i]);
    for (int k = 0; k < kJetSize; ++k)
        for (std::size_t i = 0; i < n; ++i)
            out.nodes.w[k][i] += w6 * (k1.q[k][i] + 2.0 * k2.q[k][i] + 2.0 * k3.q[k][i] + k4.q[k][i]);
    for (std::size_t i = 0; i < out.z.size(); ++i)
        out.z[i] += w6 * (k1.z[i] + 2.0 * k2.z[i] + 2.0 * k3.z[i] + k4.z[i]);
    out.xi_frame += dt * c;
    out.t_tilde += dt;
    for (std::size_t i = 1; i < n; ++i) {
        if (!(out.nodes.theta[i] > out.nodes.theta[i - 1]))
            raise(ErrorKind::DomainError, "characteristics crossed");
    }
    sync(out);
    return out;
}

auto support_extent(const EquivariantState& st, double threshold) -> double
{
    double extent = 0.0;
    for (std::size_t i = 0; i < st.grid.size(); ++i) {
        if (std::abs(st.w[i] - st.sigma_inf) > threshold || std::abs(st.z[i] + st.sigma_inf) > threshold)
            extent = std::max(extent, std::abs(st.grid[i]));
    }
    return extent;
}

auto min_sigma(const EquivariantState& st) -> double
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < st.grid.size(); ++i) m = std::min(m, 0.5 * (st.w[i] - st.z[i]));
    for (std::size_t i = 0; i < st.nodes.size(); ++i) m = std::min(m, 0.5 * (st.nodes.w[0][i] - st.nodes.z[0][i]));
    return m;
}

auto max_slope(const EquivariantState& st) -> double
{
    double m = 0.0;
    for (double v : st.nodes.w[1]) m = std::max(m, std::abs(v));
    return m;
}

// ============================================================================
// Driver
// ============================================================================

namespace {

struct OdeTracker {
    double kappa = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    modulation::OdeRates last{};
    bool have_last = false;
};

auto exterior_gradient(const EquivariantState& st, double xi, double delta) -> double
{
    double m = 0.0;
    const auto& nd = st.nodes;
    for (std::size_t i = 0; i < nd.size(); ++i) {
        if (std::abs(nd.theta[i] + st.xi_frame - xi) <= delta) continue;
        const double w1 = nd.w[1][i];
        const double z1 = nd.z[1][i];
        m = std::max(m, 0.5 * (std::abs(w1 + z1) + std::abs(w1 - z1)));
    }
    return m;
}

auto make_snapshot(const EquivariantState& st, const selfsim::SelfSimField& f, const ModulationState& m,
                   const BetaConstants& b, double dxi, double frame_speed) -> Snapshot
{
    Snapshot sn;
    sn.t_tilde = st.t_tilde;
    sn.s = f.s;
    sn.kappa = m.kappa;
    sn.tau = m.tau;
    sn.xi = m.xi;
    sn.beta_tau = m.beta_tau();
    sn.frame_speed = frame_speed;
    sn.theta_tilde = st.nodes.theta;
    sn.w = st.nodes.w[0];
    sn.z = st.nodes.z[0];
    sn.y = f.y;
    sn.W = f.W;
    sn.Z = f.Z;
    sn.dW = f.dW[0];
    const double es = std::exp(0.5 * f.s);
    sn.G_W.resize(f.y.size());
    sn.G_Z.resize(f.y.size());
    for (std::size_t i = 0; i < f.y.size(); ++i) {
        sn.G_W[i] = sn.beta_tau * es * (m.kappa + b.beta2 * f.Z[i] - dxi);
        sn.G_Z[i] = sn.beta_tau * es * (b.beta2 * m.kappa + f.Z[i] - dxi);
    }
    return sn;
}

}  // namespace

auto run_until_blowup(const SolverConfig& cfg, const ModulationConfig& mod, const MonitorConfig& mon,
                      const Observer& observer) -> RunRecord
{
    RunRecord rec;
    rec.solver = cfg;
    rec.monitor = mon;
    const BetaConstants b = riemann::betas(cfg.gamma);
    EquivariantState st = initial_data(cfg);
    rec.initial_min_slope = *std::min_element(st.nodes.w[1].begin(), st.nodes.w[1].end());

    const double cap = cfg.slope_cap();
    const double t_end = cfg.final_time();
    const double l = mon.small_l();
    const double L = mon.large_L(cfg.tau0);
    selfsim::BootstrapConstants bc{mon.M, cfg.tau0, l, L, cfg.sigma_inf};

    OdeTracker ode{cfg.kappa0(), cfg.tau0, cfg.xi0};
    double prev_t = 0.0;
    double frame_speed = cfg.modulation_coupling ? 2.0 * b.beta3 * cfg.kappa0() : 0.0;
    std::size_t next_growth = 0;
    std::vector<double> growth = mon.snapshot_growth;
    std::sort(growth.begin(), growth.end());
    const double slope0 = std::abs(rec.initial_min_slope);
    // Without an initial gradient there is no shock to normalize around.
    const bool shock = rec.initial_min_slope < 0.0;
    int record_count = 0;

    for (int step_index = 0;; ++step_index) {
        modulation::Extremal ext;
        bool tracked = true;
        try {
            ext = modulation::track_extremal(st);
        } catch (const Error& e) {
            tracked = false;
            rec.message = e.what();
        }
        const double slope = max_slope(st);
        const bool finite = std::isfinite(slope) && tracked;

        modulation::OdeRates rates{std::nan(""), std::nan(""), std::nan("")};
        const bool need_rates = shock && (cfg.modulation_coupling || step_index % std::max(1, mod.validate_every) == 0);
        if (finite && need_rates) {
            ModulationState m{st.t_tilde, ext.kappa, ext.tau, ext.xi, 0.0};
            try {
                rates = modulation::ode_rhs_physical(ext.at, m, b, cfg.flat_mode);
            } catch (const Error&) {
            }
        }
        // Trapezoidal update of the ODE tracker with the fresh rates.
        if (std::isfinite(rates.dkappa)) {
            const double h = st.t_tilde - prev_t;
            if (ode.have_last && h > 0.0) {
                ode.kappa += 0.5 * h * (ode.last.dkappa + rates.dkappa);
                ode.tau += 0.5 * h * (ode.last.dtau + rates.dtau);
                ode.xi += 0.5 * h * (ode.last.dxi + rates.dxi);
            }
            ode.last = rates;
            ode.have_last = true;
            prev_t = st.t_tilde;
        }
        if (cfg.modulation_coupling && std::isfinite(rates.dxi)) frame_speed = rates.dxi;

        const double sigma_min = min_sigma(st);
        RunStatus stop = RunStatus::Running;
        if (!finite || !std::isfinite(sigma_min)) {
            stop = RunStatus::NumericalFailure;
        } else if (sigma_min <= 0.0) {
            stop = RunStatus::Vacuum;
        } else if (slope >= cap) {
            stop = RunStatus::BlewUp;
        } else if (st.t_tilde >= t_end * (1.0 - 1e-14)) {
            stop = RunStatus::MaxTime;
        }

        double dt = 0.0;
        if (stop == RunStatus::Running) {
            dt = std::min(max_dt(st, frame_speed, b, cfg), t_end - st.t_tilde);
            if (dt < cfg.dt_floor) stop = slope >= 10.0 * slope0 ? RunStatus::BlewUp : RunStatus::NumericalFailure;
        }

        const bool record_now = stop != RunStatus::Running || step_index % cfg.record_every == 0;
        if (record_now && finite) {
            RunSample smp;
            smp.step = step_index;
            smp.t_tilde = st.t_tilde;
            smp.dt = dt;
            smp.xi_frame = st.xi_frame;
            smp.frame_speed = frame_speed;
            smp.max_slope = slope;
            smp.slope_location = ext.theta_tilde;
            smp.min_sigma = sigma_min;
            smp.holder = diagnostics::holder_seminorm(st.nodes.theta, st.nodes.w[0]);
            smp.support_extent = support_extent(st, 1e-12 * cfg.sigma_inf);
            smp.dkappa_ode = rates.dkappa;
            smp.dtau_ode = rates.dtau;
            smp.dxi_ode = rates.dxi;
            smp.kappa_ode = ode.kappa;
            smp.tau_ode = ode.tau;
            smp.xi_ode = ode.xi;
            double zshift = 0.0;
            for (double v : st.z) zshift = std::max(zshift, std::abs(v + cfg.sigma_inf));
            smp.z_shift_max = zshift;

            ModulationState m{st.t_tilde, ext.kappa, ext.tau, ext.xi,
                              std::isfinite(rates.dtau) ? rates.dtau : 0.0};
            m.xi_local = ext.theta_tilde;
            if (mod.tracker == Tracker::Ode) {
                m.kappa = ode.kappa;
                m.tau = ode.tau;
                m.xi = ode.xi;
                m.xi_local = std::nan("");
            }
            smp.kappa = m.kappa;
            smp.tau = m.tau;
            smp.xi = m.xi;
            smp.exterior_gradient = exterior_gradient(st, m.xi, mon.exterior_delta);
            if (shock && std::isfinite(m.tau) && m.tau > st.t_tilde) {
                smp.s = m.s();
                const auto field = selfsim::to_selfsimilar(st, m);
                const auto at0 = selfsim::interpolate_W(field, 0.0);
                smp.W0 = at0[0];
                smp.dW0 = at0[1];
                smp.d3W0 = at0[3];
                if (mon.bootstrap_every > 0 && record_count % mon.bootstrap_every == 0) {
                    smp.profile_distance = selfsim::profile_distance(field, l, L);
                    const auto rep = selfsim::bootstrap_report(field, bc);
                    BootstrapSummary sum;
                    for (const auto& [name, mg] : rep.entries) sum.margins[name] = mg.margin;
                    sum.all_pass = rep.all_pass();
                    smp.bootstrap = sum;
                }
                bool snap = mon.snapshot_every > 0 && record_count % mon.snapshot_every == 0;
                if (next_growth < growth.size() && slope >= growth[next_growth] * slope0) {
                    snap = true;
                    while (next_growth < growth.size() && slope >= growth[next_growth] * slope0) ++next_growth;
                }
                if (snap) {
                    const double dxi = std::isfinite(rates.dxi) ? rates.dxi : 2.0 * b.beta3 * m.kappa;
                    rec.snapshots.push_back(make_snapshot(st, field, m, b, dxi, frame_speed));
                }
            }
            rec.samples.push_back(smp);
            ++record_count;
            if (observer) observer(st, smp);
        }

        if (stop != RunStatus::Running) {
            rec.status = stop;
            break;
        }
        try {
            st = step(st, frame_speed, dt, b, cfg);
        } catch (const Error& e) {
            rec.status = e.kind() == ErrorKind::PoleSingularity ? RunStatus::PoleSingularity
                         : slope >= 10.0 * slope0                ? RunStatus::BlewUp
                                                                 : RunStatus::NumericalFailure;
            rec.message = e.what();
            break;
        }
    }

    if (!rec.samples.empty()) rec.tau_end = rec.samples.back().tau;
    if (rec.status == RunStatus::BlewUp) {
        try {
            rec.T_star = diagnostics::blowup_time(rec).T_star;
        } catch (const Error& e) {
            rec.message = e.what();
        }
    }
    return rec;
}

// ============================================================================
// Characteristics oracle
// ============================================================================

CharacteristicsOracle::CharacteristicsOracle(std::function<double(double)> w0, std::function<double(double)> dw0,
                                             double theta_lo, double theta_hi, int samples)
    : w0_(std::move(w0)), dw0_(std::move(dw0)), lo_(theta_lo), hi_(theta_hi)
{
    double best = 0.0;
    double best_x = lo_;
    const double h = (hi_ - lo_) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double x = lo_ + i * h;
        const double d = dw0_(x);
        if (d < best) {
            best = d;
            best_x = x;
        }
    }
    // Golden-section refinement of the most negative slope.
    double a = std::max(lo_, best_x - h);
    double c = std::min(hi_, best_x + h);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && c - a > 1e-16 * std::max(1.0, std::abs(best_x)); ++it) {
        const double x1 = c - g * (c - a);
        const double x2 = a + g * (c - a);
        if (dw0_(x1) < dw0_(x2)) c = x2;
        else a = x1;
    }
    best = std::min(best, dw0_(0.5 * (a + c)));
    crossing_ = best < 0.0 ? -1.0 / best : std::numeric_limits<double>::infinity();
}

auto CharacteristicsOracle::evaluate(double theta, double t) const -> double
{
    if (t >= crossing_) raise(ErrorKind::OracleDomain, "oracle queried at or after the crossing time");
    // θ = θ₀ + w₀(θ₀)t is strictly increasing in θ₀ before crossing.
    auto map = [&](double x0) { return x0 + w0_(x0) * t - theta; };
    double a = lo_;
    double c = hi_;
    while (map(a) > 0.0) a -= (hi_ - lo_);
    while (map(c) < 0.0) c += (hi_ - lo_);
    double x = 0.5 * (a + c);
    for (int it = 0; it < 200; ++it) {
        const double fx = map(x);
        if (fx == 0.0) break;
        if (fx > 0.0) c = x;
        else a = x;
        const double dfx = 1.0 + dw0_(x) * t;
        double nx = x - fx / dfx;
        if (!(nx > a && nx < c)) nx = 0.5 * (a + c);
        if (std::abs(nx - x) <= 1e-17 * std::max(1.0, std::abs(x))) {
            x = nx;
            break;
        }
        x = nx;
    }
    return w0_(x);
}

}  // namespace s2shock::equivariant
