#pragma once

#include "s2shock/riemann.hpp"
#include "s2shock/state.hpp"

#include <functional>
#include <vector>

/// Equivariant Euler system on the sphere in Riemann variables,
///   ∂t w + (w + β₂z − c)∂θ w = ½β₃(w² − z²) tan(θ̃ + ξ),
///   ∂t z + (β₂w + z − c)∂θ z = ½β₃(z² − w²) tan(θ̃ + ξ),
/// with frame speed c = ∂t ξ_frame.
namespace s2shock::equivariant {

using riemann::BetaConstants;

void validate(const SolverConfig& cfg);

/// Jets (derivatives 0..4) of w₀ at θ̃.
auto initial_w_jet(const SolverConfig& cfg, double theta) -> std::array<double, numerics::kJetSize>;

auto initial_data(const SolverConfig& cfg) -> EquivariantState;

/// Recompute the grid samples of w and the jets of z at the nodes (Lagrangian),
/// or the finite-difference jets (Eulerian).
void sync(EquivariantState& st);

struct Rhs {
    std::vector<double> dw;
    std::vector<double> dz;
};

/// Eulerian right-hand side on the grid: WENO5 upwinding of both transports.
auto rhs(const EquivariantState& st, double frame_speed, const BetaConstants& b, const SolverConfig& cfg) -> Rhs;

/// Largest step allowed by the grid CFL and the jet bound.
auto max_dt(const EquivariantState& st, double frame_speed, const BetaConstants& b, const SolverConfig& cfg) -> double;

/// One classical RK4 step. Throws ContractViolation when dt exceeds max_dt by
/// more than 1e-12 relative, PoleSingularity near θ = ±π/2.
auto step(const EquivariantState& st, double frame_speed, double dt, const BetaConstants& b, const SolverConfig& cfg)
    -> EquivariantState;

/// Half-width of the region where (w, z) differs from (σ∞, −σ∞) by more than `threshold`.
auto support_extent(const EquivariantState& st, double threshold) -> double;

auto min_sigma(const EquivariantState& st) -> double;
auto max_slope(const EquivariantState& st) -> double;

using Observer = std::function<void(const EquivariantState&, const RunSample&)>;

auto run_until_blowup(const SolverConfig& cfg, const ModulationConfig& mod = {}, const MonitorConfig& mon = {},
                      const Observer& observer = {}) -> RunRecord;

/// Exact solution of ∂t w + w ∂θ w = 0 by characteristics.
class CharacteristicsOracle {
public:
    CharacteristicsOracle(std::function<double(double)> w0, std::function<double(double)> dw0, double theta_lo,
                          double theta_hi, int samples = 20001);

    auto crossing_time() const -> double { return crossing_; }
    /// Solution at (θ, t); throws OracleDomain for t ≥ crossing time.
    auto evaluate(double theta, double t) const -> double;

private:
    std::function<double(double)> w0_;
    std::function<double(double)> dw0_;
    double lo_;
    double hi_;
    double crossing_;
};

}  // namespace s2shock::equivariant
