#pragma once

#include "s2shock/state.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace s2shock::selfsim {

/// y = (θ − ξ)e^{3s/2}, W = e^{s/2}(w − κ), Z = z, with y-derivatives rescaled
/// from the θ-jets.
struct SelfSimField {
    double s = 0.0;
    double kappa = 0.0;
    double tau = 0.0;
    double xi = 0.0;
    double t_tilde = 0.0;
    double xi_frame = 0.0;
    std::vector<double> y;
    std::vector<double> W;
    std::vector<double> Z;
    /// dW[k-1] = ∂y^k W, dZ[k-1] = ∂y^k Z for k = 1..4.
    std::array<std::vector<double>, 4> dW;
    std::array<std::vector<double>, 4> dZ;
};

auto to_selfsimilar(const EquivariantState& st, const ModulationState& m) -> SelfSimField;

struct PhysicalSamples {
    std::vector<double> theta_tilde;
    std::vector<double> w;
    std::vector<double> z;
};

auto from_selfsimilar(const SelfSimField& f) -> PhysicalSamples;

/// ∂y^k W at y, k = 0..4, from Hermite interpolation of the sampled jets.
auto interpolate_W(const SelfSimField& f, double y) -> std::array<double, 5>;

struct BootstrapConstants {
    double M = 100.0;
    double tau0 = 1e-2;
    double l = 0.0;
    double L = 0.0;
    double sigma_inf = 1.0;
};

struct Margin {
    double margin = 0.0;
    double worst_y = 0.0;
    bool pass = true;
};

struct BootstrapReport {
    std::map<std::string, Margin> entries;
    bool ba_w_pass = true;
    bool ba_z_pass = true;
    bool ba_wtilde_pass = true;

    auto all_pass() const -> bool { return ba_w_pass && ba_z_pass; }
};

auto bootstrap_report(const SelfSimField& f, const BootstrapConstants& c) -> BootstrapReport;

/// {sup_{|y|≤l}|W−W̄|, sup_{|y|≤L}⟨y⟩^{−1/3}|W−W̄|, sup_{|y|≤L}⟨y⟩^{2/3}|∂y(W−W̄)|}
auto profile_distance(const SelfSimField& f, double l, double L) -> std::array<double, 3>;

}  // namespace s2shock::selfsim
