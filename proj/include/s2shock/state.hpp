#pragma once

#include "s2shock/numerics.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace s2shock {

enum class Scheme { Lagrangian, Eulerian };
enum class InitialKind { Profile, Steady, Dip };
enum class Tracker { Extremal, Ode };

auto to_string(Scheme s) -> const char*;
auto to_string(InitialKind k) -> const char*;
auto to_string(Tracker t) -> const char*;

struct SolverConfig {
    double gamma = 1.4;
    double sigma_inf = 2.0;
    double xi0 = std::numbers::pi / 12.0;
    double tau0 = 1e-2;
    int n_cells = 8192;
    /// Lagrangian characteristic nodes; 0 means n_cells.
    int n_nodes = 0;
    /// sinh-graded initial node placement concentrated on the profile core.
    bool node_grading = true;
    double cfl = 0.4;
    /// Bound on dt·max|∂θw| for the jet ODEs.
    double jet_cfl = 0.05;
    bool flat_mode = false;
    bool modulation_coupling = true;
    /// 0 means 10⁴/τ₀.
    double blowup_slope_cap = 0.0;
    double dt_floor = 1e-13;
    /// 0 means 3τ₀.
    double t_max = 0.0;
    /// 0 means ξ₀/5.
    double domain_half_width = 0.0;
    /// 0 means ξ₀/10.
    double support_half_width = 0.0;
    /// 0 means ξ₀/20.
    double plateau_half_width = 0.0;
    double pole_margin = std::numbers::pi / 16.0;
    bool enforce_regime = true;
    Scheme scheme = Scheme::Lagrangian;
    InitialKind initial = InitialKind::Profile;
    double dip_amplitude = 1.5;
    int record_every = 1;

    auto slope_cap() const -> double { return blowup_slope_cap > 0.0 ? blowup_slope_cap : 1e4 / tau0; }
    auto final_time() const -> double { return t_max > 0.0 ? t_max : 3.0 * tau0; }
    auto half_width() const -> double { return domain_half_width > 0.0 ? domain_half_width : xi0 / 5.0; }
    auto support() const -> double { return support_half_width > 0.0 ? support_half_width : xi0 / 10.0; }
    auto plateau() const -> double { return plateau_half_width > 0.0 ? plateau_half_width : xi0 / 20.0; }
    auto node_count() const -> int { return n_nodes > 0 ? n_nodes : n_cells; }
    auto kappa0() const -> double { return sigma_inf; }
};

struct ModulationConfig {
    Tracker tracker = Tracker::Extremal;
    int validate_every = 1;
};

struct MonitorConfig {
    double M = 100.0;
    /// 0 means (ln M)⁻⁵.
    double l = 0.0;
    /// 0 means τ₀^{-1/10}.
    double L = 0.0;
    double exterior_delta = 0.1;
    /// Bootstrap/profile monitors run every this many records; 0 disables.
    int bootstrap_every = 1;
    /// Full self-similar snapshots kept every this many records; 0 disables.
    int snapshot_every = 0;
    /// Snapshots are also taken at these slope-growth factors (relative to τ₀⁻¹).
    std::vector<double> snapshot_growth = {};

    auto small_l() const -> double { return l > 0.0 ? l : std::pow(std::log(M), -5.0); }
    auto large_L(double tau0) const -> double { return L > 0.0 ? L : std::pow(tau0, -0.1); }
};

/// Sampled fields with derivative jets: q[k][i] = ∂θ^k of the field at theta[i].
struct JetField {
    std::vector<double> theta;
    std::array<std::vector<double>, numerics::kJetSize> w;
    std::array<std::vector<double>, numerics::kJetSize> z;

    auto size() const -> std::size_t { return theta.size(); }
    void resize(std::size_t n);
};

/// Physical-space fields of the equivariant system in the frame θ̃ = θ − ξ_frame.
struct EquivariantState {
    double theta_min = 0.0;
    double dtheta = 0.0;
    /// Uniform cell-centre grid.
    std::vector<double> grid;
    std::vector<double> w;
    std::vector<double> z;
    double t_tilde = 0.0;
    double xi_frame = 0.0;
    Scheme scheme = Scheme::Lagrangian;
    /// Lagrangian: characteristic nodes carrying exact jets of w. Eulerian: the
    /// grid itself with finite-difference jets. z jets are interpolated from the grid.
    JetField nodes;
    double sigma_inf = 0.0;
};

struct ModulationState {
    double t_tilde = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double dtau_dt = 0.0;
    /// ξ − ξ_frame when known exactly; NaN means recompute it from ξ.
    double xi_local = std::nan("");

    auto s() const -> double { return -std::log(tau - t_tilde); }
    auto offset(double xi_frame) const -> double { return std::isnan(xi_local) ? xi - xi_frame : xi_local; }
    auto beta_tau() const -> double { return 1.0 / (1.0 - dtau_dt); }
};

enum class RunStatus { BlewUp, MaxTime, Vacuum, NumericalFailure, PoleSingularity, Running };
auto to_string(RunStatus s) -> const char*;

struct BootstrapSummary {
    /// Named margins, bound − |quantity| minimised over the evaluation set.
    std::map<std::string, double> margins;
    bool all_pass = true;
};

struct RunSample {
    int step = 0;
    double t_tilde = 0.0;
    double dt = 0.0;
    double s = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double xi_frame = 0.0;
    double frame_speed = 0.0;
    double max_slope = 0.0;
    double slope_location = 0.0;
    double min_sigma = 0.0;
    double holder = 0.0;
    double support_extent = 0.0;
    double exterior_gradient = 0.0;
    double dkappa_ode = 0.0;
    double dtau_ode = 0.0;
    double dxi_ode = 0.0;
    double kappa_ode = 0.0;
    double tau_ode = 0.0;
    double xi_ode = 0.0;
    double W0 = 0.0;
    double dW0 = 0.0;
    double d3W0 = 0.0;
    double z_shift_max = 0.0;
    std::optional<std::array<double, 3>> profile_distance;
    std::optional<BootstrapSummary> bootstrap;
};

struct Snapshot {
    double t_tilde = 0.0;
    double s = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double beta_tau = 1.0;
    double frame_speed = 0.0;
    std::vector<double> theta_tilde;
    std::vector<double> w;
    std::vector<double> z;
    std::vector<double> y;
    std::vector<double> W;
    std::vector<double> Z;
    std::vector<double> dW;
    std::vector<double> G_W;
    std::vector<double> G_Z;
};

struct RunRecord {
    std::vector<RunSample> samples;
    std::vector<Snapshot> snapshots;
    RunStatus status = RunStatus::Running;
    std::string message;
    double T_star = std::nan("");
    double tau_end = std::nan("");
    double initial_min_slope = std::nan("");
    SolverConfig solver;
    MonitorConfig monitor;
};

}  // namespace s2shock
