#include "s2shock/profile.hpp"

#include "s2shock/error.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace s2shock::profile {

namespace {

auto newton_polish(double w, double y, int iters) -> double
{
    for (int i = 0; i < iters; ++i) {
        const double f = w + w * w * w + y;
        w -= f / (1.0 + 3.0 * w * w);
    }
    return w;
}

// Real root of W³ + W + q = 0 for q > 0. With A the cube root of the larger
// (in magnitude) Cardano branch, the other branch is −1/(3A).
auto cardano_positive(double q) -> double
{
    const double half = 0.5 * q;
    const double root = half * std::sqrt(1.0 + 4.0 / (27.0 * q * q));
    const double a = std::cbrt(-half - root);
    return a - 1.0 / (3.0 * a);
}

// Polynomials in (W, P, y₂) where P = ∂₁W̄ = −1/(1 + y₂² + 3W̄²).
using Monomial = std::array<int, 3>;
using Poly = std::map<Monomial, double>;

void add_term(Poly& out, Monomial m, double c)
{
    if (c == 0.0) return;
    auto& slot = out[m];
    slot += c;
    if (slot == 0.0) out.erase(m);
}

auto multiply(const Poly& a, const Poly& b) -> Poly
{
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b)
            add_term(out, {ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}, ca * cb);
    return out;
}

// Derivative images of the generators W, P, y₂ under ∂₁ (dir 0) and ∂₂ (dir 1).
auto generator_images(int dir) -> std::array<Poly, 3>
{
    if (dir == 0) {
        return {Poly{{{0, 1, 0}, 1.0}}, Poly{{{1, 3, 0}, 6.0}}, Poly{}};
    }
    return {Poly{{{1, 1, 1}, 2.0}},
            Poly{{{0, 2, 1}, 2.0}, {{2, 3, 1}, 12.0}},
            Poly{{{0, 0, 0}, 1.0}}};
}

auto differentiate(const Poly& p, int dir) -> Poly
{
    const auto images = generator_images(dir);
    Poly out;
    for (const auto& [m, c] : p) {
        for (int g = 0; g < 3; ++g) {
            if (m[g] == 0) continue;
            Monomial rest = m;
            rest[g] -= 1;
            const Poly scaled = multiply(Poly{{rest, c * m[g]}}, images[g]);
            for (const auto& [mm, cc] : scaled) add_term(out, mm, cc);
        }
    }
    return out;
}

struct DerivTable {
    // index [g1][g2] for g1 + g2 ≤ 4
    std::array<std::array<Poly, 5>, 5> polys;

    DerivTable()
    {
        polys[0][0] = Poly{{{1, 0, 0}, 1.0}};
        for (int g1 = 1; g1 <= 4; ++g1) polys[g1][0] = differentiate(polys[g1 - 1][0], 0);
        for (int g1 = 0; g1 <= 4; ++g1)
            for (int g2 = 1; g1 + g2 <= 4; ++g2) polys[g1][g2] = differentiate(polys[g1][g2 - 1], 1);
    }
};

auto table() -> const DerivTable&
{
    static const DerivTable t;
    return t;
}

auto eval_poly(const Poly& p, double w, double pp, double y2) -> double
{
    double acc = 0.0;
    for (const auto& [m, c] : p)
        acc += c * std::pow(w, m[0]) * std::pow(pp, m[1]) * std::pow(y2, m[2]);
    return acc;
}

}  // namespace

auto w1d(double y) -> double
{
    if (!std::isfinite(y)) raise(ErrorKind::DomainError, "w1d: non-finite input");
    if (y == 0.0) return 0.0;
    if (std::abs(y) < 1e-3) return newton_polish(-y, y, 4);
    const double w = y > 0.0 ? cardano_positive(y) : -cardano_positive(-y);
    return newton_polish(w, y, 1);
}

auto w1d_deriv(double y, int order) -> double
{
    if (order < 1 || order > 4) raise(ErrorKind::ContractViolation, "w1d_deriv: order must be in 1..4");
    const double w = w1d(y);
    const double w2 = w * w;
    const double d = 1.0 + 3.0 * w2;
    switch (order) {
    case 1: return -1.0 / d;
    case 2: return -6.0 * w / std::pow(d, 3);
    case 3: return (6.0 - 90.0 * w2) / std::pow(d, 5);
    default: return w * (360.0 - 2160.0 * w2) / std::pow(d, 7);
    }
}

auto w2d(double y1, double y2) -> double
{
    if (!std::isfinite(y1) || !std::isfinite(y2)) raise(ErrorKind::DomainError, "w2d: non-finite input");
    const double br = std::sqrt(1.0 + y2 * y2);
    return br * w1d(y1 / (br * br * br));
}

auto w2d_deriv(double y1, double y2, int g1, int g2) -> double
{
    if (g1 < 0 || g2 < 0 || g1 + g2 > 4) raise(ErrorKind::UnsupportedOrder, "w2d_deriv: |gamma| must be <= 4");
    const double w = w2d(y1, y2);
    if (g1 == 0 && g2 == 0) return w;
    const double p = -1.0 / (1.0 + y2 * y2 + 3.0 * w * w);
    return eval_poly(table().polys[g1][g2], w, p, y2);
}

auto evaluate(double y1, double y2) -> ProfileEval
{
    ProfileEval e;
    e.value = w2d(y1, y2);
    e.grad = {w2d_deriv(y1, y2, 1, 0), w2d_deriv(y1, y2, 0, 1)};
    const double h12 = w2d_deriv(y1, y2, 1, 1);
    e.hessian = {{{w2d_deriv(y1, y2, 2, 0), h12}, {h12, w2d_deriv(y1, y2, 0, 2)}}};
    e.third = {w2d_deriv(y1, y2, 3, 0), w2d_deriv(y1, y2, 2, 1), w2d_deriv(y1, y2, 1, 2),
               w2d_deriv(y1, y2, 0, 3)};
    return e;
}

auto eta(double y1, double y2, double p) -> double
{
    const double y2sq = y2 * y2;
    return std::pow(1.0 + y1 * y1 + y2sq * y2sq * y2sq, p);
}

auto selfsimilar_burgers_residual(double y1, double y2) -> double
{
    const double w = w2d(y1, y2);
    const double d1 = w2d_deriv(y1, y2, 1, 0);
    const double d2 = w2d_deriv(y1, y2, 0, 1);
    return -0.5 * w + (1.5 * y1 + w) * d1 + 0.5 * y2 * d2;
}

auto bound_exponent(int g1, int g2) -> double { return 1.0 / 6.0 - g1 / 2.0 - g2 / 6.0; }

auto bound_constant(int g1, int g2) -> double
{
    if (g1 < 0 || g2 < 0 || g1 + g2 > 4) raise(ErrorKind::UnsupportedOrder, "bound_constant: |gamma| must be <= 4");
    // Sup of |∂^γW̄|·η^{−e_γ} over |y₁| ≤ 1e6, |y₂| ≤ 1e4, rounded up.
    static const std::array<std::array<double, 5>, 5> c = {{
        {1.0, 0.578, 0.8, 2.9, 17.5},
        {1.0, 2.01, 6.01, 24.1, 0.0},
        {0.96, 5.4, 36.0, 0.0, 0.0},
        {6.0, 48.1, 0.0, 0.0, 0.0},
        {31.0, 0.0, 0.0, 0.0, 0.0},
    }};
    return c[g1][g2];
}

}  // namespace s2shock::profile
