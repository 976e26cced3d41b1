#include "s2shock/selfsim.hpp"

#include "s2shock/error.hpp"
#include "s2shock/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace s2shock::selfsim {

auto to_selfsimilar(const EquivariantState& st, const ModulationState& m) -> SelfSimField
{
    if (!(m.tau > m.t_tilde)) raise(ErrorKind::PastBlowup, "to_selfsimilar: tau must exceed t");
    SelfSimField f;
    f.s = m.s();
    f.kappa = m.kappa;
    f.tau = m.tau;
    f.xi = m.xi;
    f.t_tilde = m.t_tilde;
    f.xi_frame = st.xi_frame;
    const auto& nd = st.nodes;
    const std::size_t n = nd.size();
    const double stretch = std::exp(1.5 * f.s);
    const double amp = std::exp(0.5 * f.s);
    const double shift = -m.offset(st.xi_frame);
    f.y.resize(n);
    f.W.resize(n);
    f.Z = nd.z[0];
    for (std::size_t i = 0; i < n; ++i) {
        f.y[i] = (nd.theta[i] + shift) * stretch;
        f.W[i] = amp * (nd.w[0][i] - m.kappa);
    }
    double scale = 1.0;
    for (int k = 1; k <= 4; ++k) {
        scale /= stretch;
        f.dW[k - 1].resize(n);
        f.dZ[k - 1].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            f.dW[k - 1][i] = amp * scale * nd.w[k][i];
            f.dZ[k - 1][i] = scale * nd.z[k][i];
        }
    }
    return f;
}

auto from_selfsimilar(const SelfSimField& f) -> PhysicalSamples
{
    PhysicalSamples p;
    const double shrink = std::exp(-1.5 * f.s);
    const double amp = std::exp(-0.5 * f.s);
    const std::size_t n = f.y.size();
    p.theta_tilde.resize(n);
    p.w.resize(n);
    p.z = f.Z;
    for (std::size_t i = 0; i < n; ++i) {
        p.theta_tilde[i] = f.y[i] * shrink + f.xi - f.xi_frame;
        p.w[i] = f.kappa + amp * f.W[i];
    }
    return p;
}

auto interpolate_W(const SelfSimField& f, double y) -> std::array<double, 5>
{
    const std::size_t n = f.y.size();
    if (n < 2) raise(ErrorKind::ContractViolation, "interpolate_W: need at least two samples");
    if (y < f.y.front() || y > f.y.back()) raise(ErrorKind::DomainError, "interpolate_W: y outside the sampled range");
    const auto it = std::upper_bound(f.y.begin(), f.y.end(), y);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - f.y.begin() - 1, 0)), n - 2);
    std::array<double, 5> a{};
    std::array<double, 5> b{};
    a[0] = f.W[k];
    b[0] = f.W[k + 1];
    for (int j = 1; j <= 4; ++j) {
        a[j] = f.dW[j - 1][k];
        b[j] = f.dW[j - 1][k + 1];
    }
    return numerics::hermite(f.y[k], f.y[k + 1], a, b, y);
}

namespace {

auto japan(double y) -> double { return std::sqrt(1.0 + y * y); }

struct Tracker {
    Margin m{std::numeric_limits<double>::infinity(), 0.0, true};

    void add(double bound, double value, double y)
    {
        double g = bound - std::abs(value);
        if (!std::isfinite(g)) g = -std::numeric_limits<double>::infinity();
        if (g < m.margin) {
            m.margin = g;
            m.worst_y = y;
        }
    }
    auto done() -> Margin
    {
        m.pass = m.margin >= 0.0;
        return m;
    }
};

auto profile_jet(double y, int k) -> double
{
    return k == 0 ? profile::w1d(y) : profile::w1d_deriv(y, k);
}

}  // namespace

auto bootstrap_report(const SelfSimField& f, const BootstrapConstants& c) -> BootstrapReport
{
    BootstrapReport r;
    const std::size_t n = f.y.size();
    const double M = c.M;
    const double es = std::exp(-1.5 * f.s);

    // BA-W
    std::array<Tracker, 5> w;
    const std::array<double, 5> wconst = {1.0 + std::pow(c.tau0, 1.0 / 23.0), 15.0, std::pow(M, 1.0 / 6.0),
                                          std::sqrt(M), M};
    const std::array<double, 5> wexp = {1.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 0.0, 0.0};
    // BA-Z
    std::array<Tracker, 5> z;
    const std::array<double, 5> zbound = {M * c.tau0, M * es, std::pow(M, 4.0 / 3.0) * es, std::pow(M, 6.0) * es,
                                          std::pow(M, 7.0) * es};
    // BA-W̃ on |y| ≤ L
    std::array<Tracker, 3> wt;
    const std::array<double, 3> wtconst = {std::pow(c.tau0, 1.0 / 3.0), std::pow(c.tau0, 0.25), std::pow(c.tau0, 0.2)};
    const std::array<double, 3> wtexp = {1.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0};

    for (std::size_t i = 0; i < n; ++i) {
        const double y = f.y[i];
        const double jy = japan(y);
        for (int k = 0; k < 5; ++k) {
            const double v = k == 0 ? f.W[i] : f.dW[k - 1][i];
            w[k].add(wconst[k] * std::pow(jy, wexp[k]), v, y);
            const double zv = k == 0 ? f.Z[i] + c.sigma_inf : f.dZ[k - 1][i];
            z[k].add(zbound[k], zv, y);
        }
        if (std::abs(y) <= c.L) {
            for (int k = 0; k < 3; ++k) {
                const double v = (k == 0 ? f.W[i] : f.dW[k - 1][i]) - profile_jet(y, k);
                wt[k].add(wtconst[k] * std::pow(jy, wtexp[k]), v, y);
            }
        }
    }
    for (int k = 0; k < 5; ++k) {
        r.entries["W" + std::to_string(k)] = w[k].done();
        r.entries["Z" + std::to_string(k)] = z[k].done();
        r.ba_w_pass = r.ba_w_pass && r.entries["W" + std::to_string(k)].pass;
        r.ba_z_pass = r.ba_z_pass && r.entries["Z" + std::to_string(k)].pass;
    }
    for (int k = 0; k < 3; ++k) {
        r.entries["Wt" + std::to_string(k)] = wt[k].done();
        r.ba_wtilde_pass = r.ba_wtilde_pass && r.entries["Wt" + std::to_string(k)].pass;
    }

    if (n >= 2 && f.y.front() < -c.l && f.y.back() > c.l) {
        Tracker origin;
        const auto at0 = interpolate_W(f, 0.0);
        origin.add(std::pow(c.tau0, 0.8), at0[3] - 6.0, 0.0);
        r.entries["Wt3_origin"] = origin.done();
        r.ba_wtilde_pass = r.ba_wtilde_pass && r.entries["Wt3_origin"].pass;

        std::array<Tracker, 5> near;
        for (double y : {-c.l, -0.5 * c.l, 0.5 * c.l, c.l}) {
            const auto jet = interpolate_W(f, y);
            const double ay = std::abs(y);
            for (int k = 0; k < 5; ++k) {
                double bound = 10.0 * M * M * std::sqrt(c.tau0) * std::pow(ay, 4 - k);
                if (k <= 3) bound += std::pow(c.tau0, 0.6) * std::pow(ay, 3 - k);
                near[k].add(bound, jet[k] - profile_jet(y, k), y);
            }
        }
        for (int k = 0; k < 5; ++k) {
            r.entries["Wt_l" + std::to_string(k)] = near[k].done();
            r.ba_wtilde_pass = r.ba_wtilde_pass && r.entries["Wt_l" + std::to_string(k)].pass;
        }
    }
    return r;
}

auto profile_distance(const SelfSimField& f, double l, double L) -> std::array<double, 3>
{
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < f.y.size(); ++i) {
        const double y = f.y[i];
        const double ay = std::abs(y);
        if (ay > L) continue;
        const double e0 = std::abs(f.W[i] - profile::w1d(y));
        const double e1 = std::abs(f.dW[0][i] - profile::w1d_deriv(y, 1));
        const double jy = japan(y);
        if (ay <= l) d[0] = std::max(d[0], e0);
        d[1] = std::max(d[1], e0 / std::cbrt(jy));
        d[2] = std::max(d[2], std::pow(jy, 2.0 / 3.0) * e1);
    }
    if (f.y.size() >= 2 && f.y.front() < -l && f.y.back() > l) {
        for (int j = -8; j <= 8; ++j) {
            const double y = l * j / 8.0;
            d[0] = std::max(d[0], std::abs(interpolate_W(f, y)[0] - profile::w1d(y)));
        }
    }
    return d;
}

}  // namespace s2shock::selfsim
