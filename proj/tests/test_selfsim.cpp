#include "s2shock/error.hpp"
#include "s2shock/profile.hpp"
#include "s2shock/selfsim.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace s2shock;
using doctest::Approx;
using testing::Jet;

namespace {

auto profile_field(double s, double sigma, double scale, double lo, double hi, std::size_t n) -> selfsim::SelfSimField
{
    selfsim::SelfSimField f;
    f.s = s;
    f.y.resize(n);
    f.W.resize(n);
    f.Z.assign(n, -sigma);
    for (auto& v : f.dW) v.resize(n);
    for (auto& v : f.dZ) v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double y = std::sinh(lo + (hi - lo) * t);
        f.y[i] = y;
        f.W[i] = scale * profile::w1d(y);
        for (int k = 1; k <= 4; ++k) f.dW[k - 1][i] = scale * profile::w1d_deriv(y, k);
    }
    return f;
}

auto constants() -> selfsim::BootstrapConstants
{
    selfsim::BootstrapConstants c;
    c.M = 100;
    c.tau0 = 1e-2;
    c.l = std::pow(std::log(c.M), -5.0);
    c.L = std::pow(c.tau0, -0.1);
    c.sigma_inf = 2.0;
    return c;
}

}  // namespace

TEST_SUITE("selfsim")
{
    TEST_CASE("constant w maps to zero W")
    {
        const double kappa = 1.7;
        auto st = testing::state_from_jets([&](double) { return Jet{kappa, 0, 0, 0, 0}; }, -1.0, -0.1, 0.1, 50);
        const ModulationState m{0.001, kappa, 0.01, 0.02, 0.0};
        const auto f = selfsim::to_selfsimilar(st, m);
        for (double v : f.W) CHECK(v == 0.0);
        CHECK(f.s == Approx(-std::log(0.009)));
    }

    TEST_CASE("round trip")
    {
        auto st = testing::state_from_jets(
            [](double x) { return Jet{2 + std::sin(5 * x), 5 * std::cos(5 * x), 0, 0, 0}; }, -1.0, -0.1, 0.1, 80);
        st.xi_frame = 0.3;
        const ModulationState m{0.002, 2.1, 0.012, 0.31, 0.0};
        const auto back = selfsim::from_selfsimilar(selfsim::to_selfsimilar(st, m));
        for (std::size_t i = 0; i < st.nodes.size(); ++i) {
            CHECK(std::abs(back.theta_tilde[i] - st.nodes.theta[i]) <= 1e-13);
            CHECK(std::abs(back.w[i] - st.nodes.w[0][i]) <= 1e-13);
            CHECK(back.z[i] == -1.0);
        }
    }

    TEST_CASE("past blow-up is rejected")
    {
        const auto st = testing::state_from_jets([](double) { return Jet{1, 0, 0, 0, 0}; }, 0.0, -0.1, 0.1, 16);
        CHECK_THROWS_AS(selfsim::to_selfsimilar(st, {0.02, 1.0, 0.01, 0.0, 0.0}), Error);
    }

    TEST_CASE("exact profile passes the bootstrap")
    {
        const auto f = profile_field(-std::log(1e-2), 2.0, 1.0, -30, 30, 4001);
        const auto r = selfsim::bootstrap_report(f, constants());
        CHECK(r.all_pass());
        CHECK(r.ba_wtilde_pass);
        for (const auto& [name, m] : r.entries) CHECK_MESSAGE(m.margin > 0.0, name);
    }

    TEST_CASE("a scaled profile fails")
    {
        const auto f = profile_field(-std::log(1e-2), 2.0, 10.0, -30, 30, 4001);
        const auto r = selfsim::bootstrap_report(f, constants());
        CHECK_FALSE(r.ba_w_pass);
        CHECK(r.entries.at("W0").margin < 0.0);
        CHECK(r.ba_z_pass);
    }

    TEST_CASE("z perturbation fails BA-Z")
    {
        auto f = profile_field(-std::log(1e-2), 2.0, 1.0, -30, 30, 2001);
        for (double& z : f.Z) z += 2.0;
        const auto r = selfsim::bootstrap_report(f, constants());
        CHECK(r.ba_w_pass);
        CHECK_FALSE(r.ba_z_pass);
    }

    TEST_CASE("interpolation reproduces the profile")
    {
        const auto f = profile_field(4.0, 2.0, 1.0, -10, 10, 2001);
        for (double y : {-3.3, -0.01, 0.0, 0.5, 7.0}) {
            const auto j = selfsim::interpolate_W(f, y);
            CHECK(j[0] == Approx(profile::w1d(y)).epsilon(1e-10));
            CHECK(j[1] == Approx(profile::w1d_deriv(y, 1)).epsilon(1e-8));
        }
        CHECK_THROWS_AS(selfsim::interpolate_W(f, 1e9), Error);
    }

    TEST_CASE("profile distance")
    {
        const auto c = constants();
        auto f = profile_field(4.0, 2.0, 1.0, -5, 5, 1001);
        for (double d : selfsim::profile_distance(f, c.l, c.L)) CHECK(d <= 1e-15);

        auto bumped = [&](double eps) {
            auto g = f;
            for (std::size_t i = 0; i < g.y.size(); ++i) {
                const double y = g.y[i];
                g.W[i] += eps * std::exp(-y * y);
                g.dW[0][i] += eps * -2 * y * std::exp(-y * y);
                g.dW[1][i] += eps * (4 * y * y - 2) * std::exp(-y * y);
                g.dW[2][i] += eps * (12 * y - 8 * y * y * y) * std::exp(-y * y);
                g.dW[3][i] += eps * (16 * y * y * y * y - 48 * y * y + 12) * std::exp(-y * y);
            }
            return selfsim::profile_distance(g, c.l, c.L);
        };
        const auto a = bumped(1e-4);
        const auto b = bumped(2e-4);
        for (int k = 0; k < 3; ++k) CHECK(b[k] == Approx(2 * a[k]).epsilon(1e-6));
    }
}
