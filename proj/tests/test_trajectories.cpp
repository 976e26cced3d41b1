#include "s2shock/error.hpp"
#include "s2shock/trajectories.hpp"

#include <doctest.h>

#include <cmath>

using namespace s2shock;
using namespace s2shock::trajectories;
using doctest::Approx;

TEST_SUITE("trajectories")
{
    TEST_CASE("linear outward field")
    {
        const auto V = [](double, double y) { return 1.5 * y; };
        const auto p = integrate_trajectory(V, 2.0, 0.3, 6.0);
        CHECK(p.phi.front() == 0.3);
        CHECK(p.s.front() == 2.0);
        CHECK(p.s_end() == Approx(6.0));
        CHECK_FALSE(p.escaped);
        for (std::size_t i = 1; i < p.s.size(); ++i) CHECK(p.s[i] > p.s[i - 1]);
        for (double s : {2.0, 3.3, 4.7, 6.0}) CHECK(p.at(s) == Approx(0.3 * std::exp(1.5 * (s - 2.0))).epsilon(1e-8));
        CHECK(growth_certificate(p, 1.0 / 3.0) > 0.0);
    }

    TEST_CASE("zero field")
    {
        const auto p = integrate_trajectory([](double, double) { return 0.0; }, 0.0, -0.7, 3.0);
        for (double v : p.phi) CHECK(v == -0.7);
        CHECK(weighted_integral(p, 2.0) == Approx(3.0 / 1.49).epsilon(1e-12));
    }

    TEST_CASE("inward field is detected")
    {
        const auto p = integrate_trajectory([](double, double y) { return -y; }, 0.0, 1.0, 2.0);
        CHECK(growth_certificate(p, 1.0 / 3.0) < 0.0);
    }

    TEST_CASE("weighted integral of the origin path")
    {
        const auto p = integrate_trajectory([](double, double) { return 0.0; }, 5.0, 0.0, 6.0);
        CHECK(weighted_integral(p, 2.0) == Approx(1.0).epsilon(1e-14));
        CHECK_THROWS_AS(weighted_integral(p, 0.01), Error);
    }

    TEST_CASE("quadrature agrees with the trapezoid reference")
    {
        const auto V = [](double s, double y) { return 1.5 * y + 0.1 * std::sin(s); };
        const auto p = integrate_trajectory(V, 0.0, 0.2, 4.0);
        for (double pw : {0.5, 1.0, 2.0})
            CHECK(weighted_integral(p, pw) == Approx(weighted_integral_trapezoid(p, pw, 200001)).epsilon(1e-8));
    }

    TEST_CASE("semigroup property")
    {
        const auto V = [](double s, double y) { return 1.5 * y - 0.3 * std::tanh(y) + 0.05 * std::cos(s); };
        const auto whole = integrate_trajectory(V, 1.0, 0.4, 5.0);
        const double mid = whole.at(3.0);
        const auto second = integrate_trajectory(V, 3.0, mid, 5.0);
        CHECK(second.phi.back() == Approx(whole.phi.back()).epsilon(1e-8));
    }

    TEST_CASE("escape is reported, not thrown")
    {
        IntegrateOptions opt;
        opt.escape_box = 1e3;
        const auto p = integrate_trajectory([](double, double y) { return y * y; }, 0.0, 1.0, 2.0, opt);
        CHECK(p.escaped);
        CHECK(p.s_end() < 2.0);
    }

    TEST_CASE("frozen field interpolates snapshots")
    {
        auto snap = [](double s, double shift) {
            Snapshot sn;
            sn.s = s;
            sn.beta_tau = 1.0;
            sn.y = {-10, 0, 10};
            sn.W = {0, 0, 0};
            sn.G_W = {shift, shift, shift};
            sn.G_Z = {-shift, -shift, -shift};
            return sn;
        };
        const FrozenField f({snap(1.0, 1.0), snap(3.0, 3.0)}, 0.5);
        CHECK(f.s_min() == 1.0);
        CHECK(f.s_max() == 3.0);
        CHECK(f.V_W(2.0, 4.0) == Approx(1.5 * 4.0 + 2.0));
        CHECK(f.V_Z(2.0, 4.0) == Approx(1.5 * 4.0 - 2.0));
        const auto z = z_leftward_margin(f, 1.0 / 6.0, 2.0);
        CHECK(z.checked > 0);
    }
}
