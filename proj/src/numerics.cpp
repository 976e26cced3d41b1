#include "s2shock/numerics.hpp"

#include "s2shock/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace s2shock::numerics {

namespace {

constexpr std::array<double, kJetSize> kFactorial = {1.0, 1.0, 2.0, 6.0, 24.0};

}  // namespace

auto Taylor::constant(double v) -> Taylor
{
    Taylor t;
    t.c[0] = v;
    return t;
}

auto Taylor::variable(double x0, double slope) -> Taylor
{
    Taylor t;
    t.c[0] = x0;
    t.c[1] = slope;
    return t;
}

auto Taylor::derivative(int k) const -> double { return c[k] * kFactorial[k]; }

auto operator+(const Taylor& a, const Taylor& b) -> Taylor
{
    Taylor r;
    for (int k = 0; k < kJetSize; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

auto operator-(const Taylor& a, const Taylor& b) -> Taylor
{
    Taylor r;
    for (int k = 0; k < kJetSize; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

auto operator*(const Taylor& a, const Taylor& b) -> Taylor
{
    Taylor r;
    for (int k = 0; k < kJetSize; ++k)
        for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
    return r;
}

auto operator*(double s, const Taylor& a) -> Taylor
{
    Taylor r;
    for (int k = 0; k < kJetSize; ++k) r.c[k] = s * a.c[k];
    return r;
}

auto reciprocal(const Taylor& a) -> Taylor
{
    Taylor r;
    r.c[0] = 1.0 / a.c[0];
    for (int k = 1; k < kJetSize; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += a.c[j] * r.c[k - j];
        r.c[k] = -acc * r.c[0];
    }
    return r;
}

auto exp(const Taylor& a) -> Taylor
{
    Taylor r;
    r.c[0] = std::exp(a.c[0]);
    for (int k = 1; k < kJetSize; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * a.c[j] * r.c[k - j];
        r.c[k] = acc / k;
    }
    return r;
}

auto tan_jet(double x) -> std::array<double, kJetSize>
{
    const double t0 = std::tan(x);
    const double t1 = 1.0 + t0 * t0;
    const double t2 = 2.0 * t0 * t1;
    const double t3 = 2.0 * (t1 * t1 + t0 * t2);
    const double t4 = 2.0 * (3.0 * t1 * t2 + t0 * t3);
    return {t0, t1, t2, t3, t4};
}

// ============================================================================
// Hermite
// ============================================================================

namespace {

// For p(t) = Σ c_j t^j of degree 2m−1, the matrix mapping the unknown upper
// coefficients c_m..c_{2m−1} to p^(k)(1), k < m.
auto hermite_inverse(int m) -> const Eigen::MatrixXd&
{
    static const std::array<Eigen::MatrixXd, 6> cache = [] {
        std::array<Eigen::MatrixXd, 6> out;
        for (int mm = 1; mm <= 5; ++mm) {
            Eigen::MatrixXd A(mm, mm);
            for (int k = 0; k < mm; ++k) {
                for (int j = mm; j < 2 * mm; ++j) {
                    double f = 1.0;
                    for (int r = 0; r < k; ++r) f *= (j - r);
                    A(k, j - mm) = f;
                }
            }
            out[mm] = A.inverse();
        }
        return out;
    }();
    return cache[m];
}

}  // namespace

auto hermite(double x0, double x1, std::span<const double> d0, std::span<const double> d1, double x)
    -> std::array<double, kJetSize>
{
    const int m = static_cast<int>(d0.size());
    if (m < 1 || m > 5 || d1.size() != d0.size()) raise(ErrorKind::ContractViolation, "hermite: 1..5 derivatives per end");
    const double h = x1 - x0;
    std::array<double, 10> c{};
    double hk = 1.0;
    std::array<double, 5> rhs{};
    for (int k = 0; k < m; ++k) {
        c[k] = d0[k] * hk / kFactorial[k];
        rhs[k] = d1[k] * hk;
        hk *= h;
    }
    // Subtract contribution of the known lower coefficients at t = 1.
    for (int k = 0; k < m; ++k) {
        for (int j = k; j < m; ++j) {
            double f = 1.0;
            for (int r = 0; r < k; ++r) f *= (j - r);
            rhs[k] -= f * c[j];
        }
    }
    const auto& inv = hermite_inverse(m);
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += inv(i, k) * rhs[k];
        c[m + i] = acc;
    }
    const int deg = 2 * m - 1;
    const double t = (x - x0) / h;
    std::array<double, kJetSize> out{};
    double scale = 1.0;
    for (int k = 0; k < kJetSize; ++k) {
        double acc = 0.0;
        for (int j = deg; j >= k; --j) {
            double f = 1.0;
            for (int r = 0; r < k; ++r) f *= (j - r);
            acc = acc * t + f * c[j];
        }
        out[k] = acc / scale;
        scale *= h;
    }
    return out;
}

// ============================================================================
// Finite differences
// ============================================================================

auto fornberg(double xi, std::span<const double> x, int max_order) -> std::vector<std::vector<double>>
{
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(max_order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - xi;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - xi;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
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
    return c;
}

void weno5_derivatives(std::span<const double> f, double dx, std::vector<double>& minus, std::vector<double>& plus)
{
    const std::size_t n = f.size() - 6;
    minus.assign(n, 0.0);
    plus.assign(n, 0.0);
    const double inv = 1.0 / dx;
    auto weno = [](double v1, double v2, double v3, double v4, double v5) {
        constexpr double eps = 1e-6;
        const double p1 = v1 / 3.0 - 7.0 * v2 / 6.0 + 11.0 * v3 / 6.0;
        const double p2 = -v2 / 6.0 + 5.0 * v3 / 6.0 + v4 / 3.0;
        const double p3 = v3 / 3.0 + 5.0 * v4 / 6.0 - v5 / 6.0;
        const double s1 = 13.0 / 12.0 * std::pow(v1 - 2.0 * v2 + v3, 2) + 0.25 * std::pow(v1 - 4.0 * v2 + 3.0 * v3, 2);
        const double s2 = 13.0 / 12.0 * std::pow(v2 - 2.0 * v3 + v4, 2) + 0.25 * std::pow(v2 - v4, 2);
        const double s3 = 13.0 / 12.0 * std::pow(v3 - 2.0 * v4 + v5, 2) + 0.25 * std::pow(3.0 * v3 - 4.0 * v4 + v5, 2);
        const double a1 = 0.1 / ((eps + s1) * (eps + s1));
        const double a2 = 0.6 / ((eps + s2) * (eps + s2));
        const double a3 = 0.3 / ((eps + s3) * (eps + s3));
        return (a1 * p1 + a2 * p2 + a3 * p3) / (a1 + a2 + a3);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i + 3;
        const double dm3 = (f[c - 2] - f[c - 3]) * inv;
        const double dm2 = (f[c - 1] - f[c - 2]) * inv;
        const double dm1 = (f[c] - f[c - 1]) * inv;
        const double dp1 = (f[c + 1] - f[c]) * inv;
        const double dp2 = (f[c + 2] - f[c + 1]) * inv;
        const double dp3 = (f[c + 3] - f[c + 2]) * inv;
        minus[i] = weno(dm3, dm2, dm1, dp1, dp2);
        plus[i] = weno(dp3, dp2, dp1, dm1, dm2);
    }
}

auto centered_derivatives(std::span<const double> f, double dx) -> std::array<std::vector<double>, kJetOrder>
{
    const int n = static_cast<int>(f.size());
    std::array<std::vector<double>, kJetOrder> out;
    for (auto& v : out) v.assign(n, 0.0);
    if (n < 7) raise(ErrorKind::ContractViolation, "centered_derivatives: need at least 7 samples");
    // 7-point stencils; offset o ∈ {0..6} is the evaluation index within the stencil.
    std::array<std::vector<std::vector<double>>, 7> weights;
    const std::array<double, 7> xs = {0, 1, 2, 3, 4, 5, 6};
    for (int o = 0; o < 7; ++o) weights[o] = fornberg(static_cast<double>(o), xs, kJetOrder);
    std::array<double, kJetOrder> scale{};
    for (int k = 0; k < kJetOrder; ++k) scale[k] = std::pow(dx, k + 1);
    for (int i = 0; i < n; ++i) {
        int start = std::clamp(i - 3, 0, n - 7);
        const int o = i - start;
        for (int k = 0; k < kJetOrder; ++k) {
            double acc = 0.0;
            for (int j = 0; j < 7; ++j) acc += weights[o][k + 1][j] * f[start + j];
            out[k][i] = acc / scale[k];
        }
    }
    return out;
}

}  // namespace s2shock::numerics
