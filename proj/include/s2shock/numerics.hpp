#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace s2shock::numerics {

constexpr int kJetOrder = 4;
constexpr int kJetSize = kJetOrder + 1;

/// Truncated Taylor series: c[k] = f^(k)(x₀)/k!.
struct Taylor {
    std::array<double, kJetSize> c{};

    static auto constant(double v) -> Taylor;
    static auto variable(double x0, double slope = 1.0) -> Taylor;
    /// f^(k)(x₀)
    auto derivative(int k) const -> double;
};

auto operator+(const Taylor& a, const Taylor& b) -> Taylor;
auto operator-(const Taylor& a, const Taylor& b) -> Taylor;
auto operator*(const Taylor& a, const Taylor& b) -> Taylor;
auto operator*(double s, const Taylor& a) -> Taylor;
auto reciprocal(const Taylor& a) -> Taylor;
auto exp(const Taylor& a) -> Taylor;

/// Derivatives 0..4 of tan at x.
auto tan_jet(double x) -> std::array<double, kJetSize>;

/// Two-point Hermite interpolation on [x0, x1] matching m derivatives (orders
/// 0..m−1) at each end, 1 ≤ m ≤ 5. Returns derivatives 0..4 at x.
auto hermite(double x0, double x1, std::span<const double> d0, std::span<const double> d1, double x)
    -> std::array<double, kJetSize>;

/// Fornberg finite-difference weights: w[k][j] approximates the k-th
/// derivative at xi from samples at x[j], k = 0..max_order.
auto fornberg(double xi, std::span<const double> x, int max_order) -> std::vector<std::vector<double>>;

/// HJ-WENO5 one-sided derivatives of f on a uniform grid with spacing dx.
/// `f` includes 3 ghost values on each side; outputs have f.size() − 6 entries.
void weno5_derivatives(std::span<const double> f, double dx, std::vector<double>& minus, std::vector<double>& plus);

/// Centered 4th-order derivatives of orders 1..4 on a uniform grid, one-sided
/// near the ends. Row k−1 holds the k-th derivative.
auto centered_derivatives(std::span<const double> f, double dx) -> std::array<std::vector<double>, kJetOrder>;

}  // namespace s2shock::numerics
