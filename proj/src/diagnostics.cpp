#include "s2shock/diagnostics.hpp"

#include "s2shock/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace s2shock::diagnostics {

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

auto least_squares(const std::vector<double>& x, const std::vector<double>& y) -> Line
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) raise(ErrorKind::DiagnosticUndefined, "degenerate regression abscissae");
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    l.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return l;
}

// The last decade of slope growth before the cut, where the cut drops the
// final 2% (in time) of the growth decade ending at the stop.
auto fit_window(const RunRecord& rec) -> std::vector<const RunSample*>
{
    const auto& s = rec.samples;
    if (s.size() < 10) raise(ErrorKind::DiagnosticUndefined, "fewer than 10 samples recorded");
    double min_slope = std::numeric_limits<double>::infinity();
    for (const auto& x : s) min_slope = std::min(min_slope, x.max_slope);
    auto decade_start = [&](std::size_t end) {
        std::size_t i = end;
        while (i > 0 && s[i - 1].max_slope >= s[end].max_slope / 10.0) --i;
        return i > 0 ? i - 1 : i;
    };
    const std::size_t last = s.size() - 1;
    const double t0 = s[decade_start(last)].t_tilde;
    const double cut = s[last].t_tilde - 0.02 * (s[last].t_tilde - t0);
    std::size_t end = last;
    while (end > 0 && s[end].t_tilde > cut) --end;
    if (!(s[end].max_slope >= 10.0 * min_slope)) raise(ErrorKind::DiagnosticUndefined, "less than one decade of slope growth");
    std::vector<const RunSample*> w;
    for (std::size_t i = decade_start(end); i <= end; ++i) w.push_back(&s[i]);
    if (w.size() < 10) raise(ErrorKind::DiagnosticUndefined, "fewer than 10 samples in the fit window");
    return w;
}

}  // namespace

auto blowup_time(const RunRecord& rec) -> BlowupTime
{
    const auto w = fit_window(rec);
    std::vector<double> t;
    std::vector<double> inv;
    for (const auto* p : w) {
        t.push_back(p->t_tilde);
        inv.push_back(1.0 / p->max_slope);
    }
    const Line l = least_squares(t, inv);
    if (!(l.slope < 0.0)) raise(ErrorKind::DiagnosticUndefined, "inverse slope is not decreasing");
    BlowupTime b;
    b.T_star = -l.intercept / l.slope;
    b.tau_end = rec.samples.back().tau;
    b.t_end = rec.samples.back().t_tilde;
    b.window_samples = w.size();
    return b;
}

auto rate_fit(const RunRecord& rec, double T_star) -> RateFit
{
    const auto w = fit_window(rec);
    std::vector<double> x;
    std::vector<double> y;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto* p : w) {
        const double gap = T_star - p->t_tilde;
        if (!(gap > 0.0)) raise(ErrorKind::DiagnosticUndefined, "sample at or beyond the blow-up time");
        x.push_back(std::log(gap));
        y.push_back(std::log(p->max_slope));
        lo = std::min(lo, p->max_slope);
        hi = std::max(hi, p->max_slope);
    }
    const Line l = least_squares(x, y);
    return {l.slope, l.r_squared, std::log10(hi / lo), w.size()};
}

auto rate_fit(const RunRecord& rec) -> RateFit { return rate_fit(rec, blowup_time(rec).T_star); }

auto holder_seminorm(std::span<const double> x, std::span<const double> f, double exponent) -> double
{
    if (x.size() != f.size()) raise(ErrorKind::ContractViolation, "holder_seminorm: size mismatch");
    const std::size_t n = x.size();
    double best = 0.0;
    for (std::size_t gap = 1; gap < n; gap *= 2) {
        for (std::size_t i = 0; i + gap < n; ++i) {
            const double d = std::abs(x[i + gap] - x[i]);
            if (d > 0.0) best = std::max(best, std::abs(f[i + gap] - f[i]) / std::pow(d, exponent));
        }
    }
    if (n >= 2) {
        const double d = std::abs(x[n - 1] - x[0]);
        if (d > 0.0) best = std::max(best, std::abs(f[n - 1] - f[0]) / std::pow(d, exponent));
    }
    return best;
}

auto holder_seminorm_dense(std::span<const double> x, std::span<const double> f, double exponent) -> double
{
    if (x.size() != f.size()) raise(ErrorKind::ContractViolation, "holder_seminorm_dense: size mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double d = std::abs(x[j] - x[i]);
            if (d > 0.0) best = std::max(best, std::abs(f[j] - f[i]) / std::pow(d, exponent));
        }
    return best;
}

auto location_report(const RunRecord& rec, double M, double delta) -> LocationReport
{
    if (delta != rec.monitor.exterior_delta)
        raise(ErrorKind::ContractViolation, "location_report: delta differs from the recorded exterior_delta");
    const auto& cfg = rec.solver;
    const auto b = riemann::betas(cfg.gamma);
    LocationReport r;
    r.drift_budget = std::pow(M, 1.75) * cfg.tau0 * cfg.tau0;
    r.exterior_budget = M + 2.0 * std::pow(delta, -2.0 / 3.0);
    for (const auto& s : rec.samples) {
        r.max_drift = std::max(r.max_drift, std::abs(s.xi - cfg.xi0 - 2.0 * b.beta3 * cfg.kappa0() * s.t_tilde));
        r.max_exterior_gradient = std::max(r.max_exterior_gradient, s.exterior_gradient);
    }
    if (!rec.samples.empty()) r.xi_star = rec.samples.back().xi;
    r.drift_pass = r.max_drift <= r.drift_budget;
    r.exterior_pass = r.max_exterior_gradient <= r.exterior_budget;
    return r;
}

auto vacuum_check(const RunRecord& rec) -> VacuumReport
{
    VacuumReport v;
    v.min_sigma = std::numeric_limits<double>::infinity();
    for (const auto& s : rec.samples) v.min_sigma = std::min(v.min_sigma, s.min_sigma);
    v.threshold = 0.5 * rec.solver.sigma_inf;
    v.pass = v.min_sigma >= v.threshold;
    return v;
}

auto BlowupReport::all_pass() const -> bool
{
    return std::all_of(pass.begin(), pass.end(), [](const auto& kv) { return kv.second; });
}

auto blowup_report(const RunRecord& rec) -> BlowupReport
{
    BlowupReport r;
    const double M = rec.monitor.M;
    const double tau0 = rec.solver.tau0;
    r.status = rec.status;
    r.tau0 = tau0;
    r.pass["blew_up"] = rec.status == RunStatus::BlewUp;
    try {
        const auto bt = blowup_time(rec);
        r.T_star = bt.T_star;
        r.tau_end = bt.tau_end;
        const auto rf = rate_fit(rec, bt.T_star);
        r.rate_exponent = rf.exponent;
        r.rate_decades = rf.decades;
        r.pass["time"] = std::abs(r.T_star - tau0) <= 2.0 * M * tau0 * tau0;
        r.pass["rate"] = std::abs(rf.exponent + 1.0) <= 0.05 && rf.decades >= 1.0 - 1e-9;
    } catch (const Error&) {
        r.T_star = std::nan("");
        r.rate_exponent = std::nan("");
        r.pass["time"] = false;
        r.pass["rate"] = false;
    }
    for (const auto& s : rec.samples) r.holder_max = std::max(r.holder_max, s.holder);
    r.pass["holder"] = r.holder_max <= kHolderBound;
    const auto v = vacuum_check(rec);
    r.min_sigma = v.min_sigma;
    r.pass["vacuum"] = v.pass;
    const auto loc = location_report(rec, M, rec.monitor.exterior_delta);
    r.xi_star = loc.xi_star;
    r.max_drift = loc.max_drift;
    r.max_exterior_gradient = loc.max_exterior_gradient;
    r.pass["drift"] = loc.drift_pass;
    r.pass["exterior_gradient"] = loc.exterior_pass;
    return r;
}

}  // namespace s2shock::diagnostics
