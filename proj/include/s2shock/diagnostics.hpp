#pragma once

#include "s2shock/riemann.hpp"
#include "s2shock/state.hpp"

#include <map>
#include <span>
#include <vector>

namespace s2shock::diagnostics {

struct BlowupTime {
    double T_star = 0.0;
    double tau_end = 0.0;
    double t_end = 0.0;
    std::size_t window_samples = 0;
};

/// Linear extrapolation of 1/max|∂θw| to zero over the final decade of growth,
/// excluding the last 2% of that window in time.
auto blowup_time(const RunRecord& rec) -> BlowupTime;

struct RateFit {
    double exponent = 0.0;
    double r_squared = 0.0;
    double decades = 0.0;
    std::size_t samples = 0;
};

/// Least-squares slope of log max|∂θw| against log(T* − t̃) over the same window.
auto rate_fit(const RunRecord& rec, double T_star) -> RateFit;
auto rate_fit(const RunRecord& rec) -> RateFit;

/// max over adjacent and dyadic-separation pairs of |f(a) − f(b)|/|a − b|^exponent.
auto holder_seminorm(std::span<const double> x, std::span<const double> f, double exponent = 1.0 / 3.0) -> double;

/// The same quotient over all pairs (quadratic cost; reference for small inputs).
auto holder_seminorm_dense(std::span<const double> x, std::span<const double> f, double exponent = 1.0 / 3.0)
    -> double;

struct LocationReport {
    double max_drift = 0.0;
    double drift_budget = 0.0;
    double max_exterior_gradient = 0.0;
    double exterior_budget = 0.0;
    double xi_star = 0.0;
    bool drift_pass = false;
    bool exterior_pass = false;
};

auto location_report(const RunRecord& rec, double M, double delta) -> LocationReport;

struct VacuumReport {
    double min_sigma = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

auto vacuum_check(const RunRecord& rec) -> VacuumReport;

/// Frozen bound on the time-uniform C^{1/3} seminorm of w for the default
/// data class (calibrated over the τ₀ sweep).
inline constexpr double kHolderBound = 2.0;

struct BlowupReport {
    RunStatus status = RunStatus::Running;
    double T_star = 0.0;
    double tau0 = 0.0;
    double tau_end = 0.0;
    double rate_exponent = 0.0;
    double rate_decades = 0.0;
    double xi_star = 0.0;
    double holder_max = 0.0;
    double min_sigma = 0.0;
    double max_drift = 0.0;
    double max_exterior_gradient = 0.0;
    std::map<std::string, bool> pass;

    auto all_pass() const -> bool;
};

auto blowup_report(const RunRecord& rec) -> BlowupReport;

}  // namespace s2shock::diagnostics
