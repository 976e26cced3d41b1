#include "s2shock/modulation.hpp"

#include "s2shock/error.hpp"

#include <algorithm>
#include <cmath>

namespace s2shock::modulation {

namespace {

auto bracket(const std::vector<double>& theta, double x) -> std::size_t
{
    const auto it = std::upper_bound(theta.begin(), theta.end(), x);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - theta.begin() - 1, 0));
}

auto w_jets(const JetField& nd, std::size_t i) -> std::array<double, numerics::kJetSize>
{
    std::array<double, numerics::kJetSize> j{};
    for (int k = 0; k < numerics::kJetSize; ++k) j[k] = nd.w[k][i];
    return j;
}

auto z_jets(const JetField& nd, std::size_t i) -> std::array<double, 3>
{
    return {nd.z[0][i], nd.z[1][i], nd.z[2][i]};
}

auto interpolate(const JetField& nd, std::size_t k, double x) -> OriginConstraints
{
    const auto a = w_jets(nd, k);
    const auto b = w_jets(nd, k + 1);
    const auto w = numerics::hermite(nd.theta[k], nd.theta[k + 1], a, b, x);
    const auto za = z_jets(nd, k);
    const auto zb = z_jets(nd, k + 1);
    const auto z = numerics::hermite(nd.theta[k], nd.theta[k + 1], za, zb, x);
    return {w[0], w[1], w[2], w[3], w[4], z[0], z[1], z[2]};
}

auto at_node(const JetField& nd, std::size_t i) -> OriginConstraints
{
    return {nd.w[0][i], nd.w[1][i], nd.w[2][i], nd.w[3][i], nd.w[4][i], nd.z[0][i], nd.z[1][i], nd.z[2][i]};
}

}  // namespace

auto constraints_from_field(const EquivariantState& st, double xi) -> OriginConstraints
{
    const auto& nd = st.nodes;
    const double x = xi - st.xi_frame;
    if (nd.size() < 8 || x < nd.theta.front() || x > nd.theta.back())
        raise(ErrorKind::MarginError, "constraints_from_field: xi outside the node range");
    const std::size_t k = std::min(bracket(nd.theta, x), nd.size() - 2);
    if (k < 3 || k + 4 >= nd.size()) raise(ErrorKind::MarginError, "constraints_from_field: xi within 4 nodes of the edge");
    return interpolate(nd, k, x);
}

auto track_extremal(const EquivariantState& st) -> Extremal
{
    const auto& nd = st.nodes;
    const std::size_t n = nd.size();
    if (n < 3) raise(ErrorKind::ContractViolation, "track_extremal: too few nodes");
    std::size_t i = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (nd.w[1][j] < nd.w[1][i]) i = j;
    if (!std::isfinite(nd.w[1][i])) raise(ErrorKind::DomainError, "track_extremal: non-finite slope");

    Extremal e;
    e.node = i;
    double x = nd.theta[i];
    OriginConstraints c = at_node(nd, i);
    if (i == 0 || i + 1 == n) {
        e.ambiguous = true;
    } else {
        // The slope decreases toward its minimum: q₂ > 0 means the minimum lies to the left.
        const std::size_t k = nd.w[2][i] > 0.0 ? i - 1 : i;
        const double a = nd.theta[k];
        const double b = nd.theta[k + 1];
        const double ga = nd.w[2][k];
        const double gb = nd.w[2][k + 1];
        if (ga == 0.0 || gb == 0.0 || (ga < 0.0) != (gb < 0.0)) {
            const auto ja = w_jets(nd, k);
            const auto jb = w_jets(nd, k + 1);
            double lo = a;
            double hi = b;
            double glo = ga;
            x = ga == 0.0 ? a : (gb == 0.0 ? b : 0.5 * (a + b));
            for (int it = 0; it < 100 && ga != 0.0 && gb != 0.0; ++it) {
                const auto d = numerics::hermite(a, b, ja, jb, x);
                if (d[2] == 0.0) break;
                if ((d[2] < 0.0) == (glo < 0.0)) {
                    lo = x;
                    glo = d[2];
                } else {
                    hi = x;
                }
                double nx = d[3] != 0.0 ? x - d[2] / d[3] : 0.5 * (lo + hi);
                if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
                if (std::abs(nx - x) <= 4e-16 * std::max(std::abs(x), b - a)) {
                    x = nx;
                    break;
                }
                x = nx;
            }
            c = interpolate(nd, k, x);
        }
    }
    e.theta_tilde = x;
    e.xi = x + st.xi_frame;
    e.kappa = c.w_at_xi;
    e.slope = std::abs(c.dw);
    e.tau = st.t_tilde + 1.0 / e.slope;
    e.at = c;
    return e;
}

auto ode_rhs(const OriginConstraints& c, const ModulationState& m, const BetaConstants& b, double Z0, double dZ0,
             double d2Z0, bool flat_mode) -> OdeRates
{
    const double s = m.s();
    if (!std::isfinite(s)) raise(ErrorKind::DomainError, "ode_rhs: tau must exceed t");
    const double eh = std::exp(-0.5 * s);
    const double W1 = std::exp(-s) * c.dw;
    const double W2 = std::exp(-2.5 * s) * c.d2w;
    const double W3 = std::exp(-4.0 * s) * c.d3w;
    if (!(std::abs(W3) >= 0.1)) raise(ErrorKind::RhsDegenerate, "ode_rhs: |d3W at 0| below 0.1");

    double F0 = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;
    if (!flat_mode) {
        const double kappa = m.kappa;
        const double H0 = kappa * kappa - Z0 * Z0;
        const double H1 = 2.0 * kappa * eh * W1 - 2.0 * Z0 * dZ0;
        const double H2 = 2.0 * eh * eh * W1 * W1 + 2.0 * kappa * eh * W2 - 2.0 * dZ0 * dZ0 - 2.0 * Z0 * d2Z0;
        const auto T = numerics::tan_jet(m.xi);
        const double e3 = std::exp(-1.5 * s);
        const double T0 = T[0];
        const double T1 = T[1] * e3;
        const double T2 = T[2] * e3 * e3;
        const double k = 0.5 * b.beta3 * eh;
        F0 = k * T0 * H0;
        F1 = k * (T1 * H0 + T0 * H1);
        F2 = k * (T2 * H0 + 2.0 * T1 * H1 + T0 * H2);
    }
    const double es = 1.0 / eh;
    const double G0 = (F2 + b.beta2 * es * d2Z0) / W3;
    OdeRates r;
    r.dkappa = es * (F0 + G0);
    r.dtau = F1 + b.beta2 * es * dZ0;
    r.dxi = m.kappa + b.beta2 * Z0 - eh * G0;
    return r;
}

auto ode_rhs_physical(const OriginConstraints& c, const ModulationState& m, const BetaConstants& b, bool flat_mode)
    -> OdeRates
{
    const double s = m.s();
    return ode_rhs(c, m, b, c.z, std::exp(-1.5 * s) * c.dz, std::exp(-3.0 * s) * c.d2z, flat_mode);
}

auto cross_validate(const RunRecord& rec, double M) -> CrossValidation
{
    CrossValidation cv;
    const auto& cfg = rec.solver;
    const auto b = riemann::betas(cfg.gamma);
    const double t2 = cfg.tau0 * cfg.tau0;
    cv.drift_budget = M * M * t2;
    cv.tau_budget = 2.0 * M * t2;
    bool first = true;
    for (const auto& smp : rec.samples) {
        cv.max_kappa_gap = std::max(cv.max_kappa_gap, std::abs(smp.kappa - smp.kappa_ode));
        cv.max_tau_gap = std::max(cv.max_tau_gap, std::abs(smp.tau - smp.tau_ode));
        cv.max_xi_gap = std::max(cv.max_xi_gap, std::abs(smp.xi - smp.xi_ode));
        const double drift = std::abs(smp.xi - cfg.xi0 - 2.0 * b.beta3 * cfg.kappa0() * smp.t_tilde);
        cv.max_drift = std::max(cv.max_drift, drift);
        cv.max_tau_shift = std::max(cv.max_tau_shift, std::abs(smp.tau - cfg.tau0));
        if (std::isfinite(smp.dtau_ode)) {
            if (first) cv.first_dtau = smp.dtau_ode;
            first = false;
            cv.last_dtau = smp.dtau_ode;
        }
    }
    cv.drift_pass = cv.max_drift <= cv.drift_budget;
    cv.tau_pass = cv.max_tau_shift <= cv.tau_budget;
    return cv;
}

}  // namespace s2shock::modulation
