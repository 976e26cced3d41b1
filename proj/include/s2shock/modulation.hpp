#pragma once

#include "s2shock/riemann.hpp"
#include "s2shock/state.hpp"

#include <array>

namespace s2shock::modulation {

using riemann::BetaConstants;

/// θ-derivatives of w (and z) at θ = ξ.
struct OriginConstraints {
    double w_at_xi = 0.0;
    double dw = 0.0;
    double d2w = 0.0;
    double d3w = 0.0;
    double d4w = 0.0;
    double z = 0.0;
    double dz = 0.0;
    double d2z = 0.0;
};

/// Hermite interpolation of the node jets at the physical location ξ.
/// Throws MarginError when fewer than 4 nodes lie on either side.
auto constraints_from_field(const EquivariantState& st, double xi) -> OriginConstraints;

struct Extremal {
    double xi = 0.0;
    double theta_tilde = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double slope = 0.0;
    std::size_t node = 0;
    bool ambiguous = false;
    OriginConstraints at;
};

/// ξ = argmin ∂θw (refined to the root of ∂θ²w), κ = w(ξ), τ = t̃ + 1/|∂θw(ξ)|.
/// Ties resolve to the leftmost node.
auto track_extremal(const EquivariantState& st) -> Extremal;

struct OdeRates {
    double dkappa = 0.0;
    double dtau = 0.0;
    double dxi = 0.0;
};

/// Modulation right-hand sides from the normalization at y = 0. Z0, dZ0, d2Z0
/// are self-similar (y-derivatives). Throws RhsDegenerate when |∂³yW⁰| < 0.1.
auto ode_rhs(const OriginConstraints& c, const ModulationState& m, const BetaConstants& b, double Z0, double dZ0,
             double d2Z0, bool flat_mode = false) -> OdeRates;

/// Convenience: ode_rhs with every input taken from physical jets.
auto ode_rhs_physical(const OriginConstraints& c, const ModulationState& m, const BetaConstants& b,
                      bool flat_mode = false) -> OdeRates;

struct CrossValidation {
    double max_kappa_gap = 0.0;
    double max_tau_gap = 0.0;
    double max_xi_gap = 0.0;
    double max_drift = 0.0;
    double drift_budget = 0.0;
    double max_tau_shift = 0.0;
    double tau_budget = 0.0;
    double first_dtau = 0.0;
    double last_dtau = 0.0;
    bool drift_pass = false;
    bool tau_pass = false;
};

/// Compare the extremal and ODE trackers along a run and check the
/// |ξ − ξ₀ − 2β₃κ₀t̃| ≤ M²τ₀² and |τ − τ₀| ≤ 2Mτ₀² bounds.
auto cross_validate(const RunRecord& rec, double M) -> CrossValidation;

}  // namespace s2shock::modulation
