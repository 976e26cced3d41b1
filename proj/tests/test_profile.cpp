#include "s2shock/error.hpp"
#include "s2shock/profile.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace s2shock;
using doctest::Approx;

TEST_SUITE("profile")
{
    TEST_CASE("w1d solves the cubic")
    {
        CHECK(profile::w1d(0.0) == 0.0);
        CHECK(profile::w1d(2.0) == Approx(-1.0).epsilon(1e-15));
        CHECK(profile::w1d(-2.0) == Approx(1.0).epsilon(1e-15));
        for (double y : {1e-9, 3e-4, 0.7, 5.0, 1e3, 1e9}) {
            const double w = profile::w1d(y);
            CHECK(std::abs(-w - w * w * w - y) <= 1e-14 * std::max(1.0, std::abs(y)));
            CHECK(profile::w1d(-y) == -w);
        }
    }

    TEST_CASE("w1d is strictly decreasing")
    {
        double prev = profile::w1d(-50.0);
        for (double y = -49.9; y < 50.0; y += 0.1) {
            const double w = profile::w1d(y);
            CHECK(w < prev);
            prev = w;
        }
    }

    TEST_CASE("w1d derivatives at the origin")
    {
        CHECK(profile::w1d_deriv(0.0, 1) == -1.0);
        CHECK(profile::w1d_deriv(0.0, 2) == 0.0);
        CHECK(profile::w1d_deriv(0.0, 3) == 6.0);
        CHECK_THROWS_AS(profile::w1d_deriv(0.0, 0), Error);
        CHECK_THROWS_AS(profile::w1d_deriv(0.0, 5), Error);
        CHECK_THROWS_AS(profile::w1d(std::nan("")), Error);
    }

    TEST_CASE("w2d examples")
    {
        CHECK(profile::w2d(0.0, 5.0) == 0.0);
        CHECK(profile::w2d(2.0, 0.0) == Approx(-1.0).epsilon(1e-15));
        auto g = testing::rng();
        for (int i = 0; i < 200; ++i) {
            const double y1 = testing::uniform(g, -100, 100);
            const double y2 = testing::uniform(g, -10, 10);
            CHECK(profile::w2d(-y1, y2) == Approx(-profile::w2d(y1, y2)).epsilon(1e-14));
        }
    }

    TEST_CASE("w2d derivatives at the origin")
    {
        CHECK(profile::w2d_deriv(0, 0, 1, 0) == Approx(-1.0));
        CHECK(profile::w2d_deriv(0, 0, 0, 1) == Approx(0.0));
        CHECK(profile::w2d_deriv(0, 0, 2, 0) == Approx(0.0));
        CHECK(profile::w2d_deriv(0, 0, 0, 2) == Approx(0.0));
        CHECK(profile::w2d_deriv(0, 0, 3, 0) == Approx(6.0));
        CHECK(profile::w2d_deriv(0, 0, 1, 2) == Approx(2.0));
        CHECK_THROWS_AS(profile::w2d_deriv(0, 0, 3, 2), Error);
        const auto e = profile::evaluate(0.0, 0.0);
        CHECK(e.grad[0] == Approx(-1.0));
        CHECK(e.third[0] == Approx(6.0));
        CHECK(e.third[2] == Approx(2.0));
    }

    TEST_CASE("w2d derivatives match finite differences")
    {
        auto g = testing::rng(7);
        for (int i = 0; i < 100; ++i) {
            const double y1 = testing::uniform(g, -20, 20);
            const double y2 = testing::uniform(g, -3, 3);
            for (int g1 = 0; g1 <= 3; ++g1) {
                for (int g2 = 0; g1 + g2 <= 3; ++g2) {
                    const double h = 1e-3;
                    const auto f = [&](double a, double b) { return profile::w2d_deriv(a, b, g1, g2); };
                    const double d1 = (f(y1 - 2 * h, y2) - 8 * f(y1 - h, y2) + 8 * f(y1 + h, y2) - f(y1 + 2 * h, y2))
                                      / (12 * h);
                    const double d2 = (f(y1, y2 - 2 * h) - 8 * f(y1, y2 - h) + 8 * f(y1, y2 + h) - f(y1, y2 + 2 * h))
                                      / (12 * h);
                    const double a1 = profile::w2d_deriv(y1, y2, g1 + 1, g2);
                    const double a2 = profile::w2d_deriv(y1, y2, g1, g2 + 1);
                    CHECK(std::abs(d1 - a1) <= 1e-6 * std::max(1.0, std::abs(a1)));
                    CHECK(std::abs(d2 - a2) <= 1e-6 * std::max(1.0, std::abs(a2)));
                }
            }
        }
    }

    TEST_CASE("eta")
    {
        CHECK(profile::eta(0, 0, 1) == 1.0);
        CHECK(profile::eta(1, 1, 1) == 3.0);
        CHECK(profile::eta(3, 0, 1.0 / 6.0) == Approx(std::pow(10.0, 1.0 / 6.0)));
        auto g = testing::rng(3);
        for (int i = 0; i < 1000; ++i) {
            const double y1 = testing::uniform(g, -5, 5);
            const double y2 = testing::uniform(g, -5, 5);
            CHECK(profile::eta(y1, y2, 1) >= 1.0);
            CHECK(profile::eta(y1, y2, 1) >= 0.5 * (1 + y1 * y1 + y2 * y2));
        }
    }

    TEST_CASE("residual vanishes")
    {
        CHECK(std::abs(profile::selfsimilar_burgers_residual(0, 0)) <= 1e-12);
        CHECK(std::abs(profile::selfsimilar_burgers_residual(2, 0)) <= 1e-10);
        CHECK(std::abs(profile::selfsimilar_burgers_residual(5, 3)) <= 1e-10);
    }

    TEST_CASE("weighted bounds on a random sample")
    {
        auto g = testing::rng(11);
        for (int i = 0; i < 2000; ++i) {
            const double y1 = testing::uniform(g, -1e3, 1e3);
            const double y2 = testing::uniform(g, -1e3, 1e3);
            const double eta = profile::eta(y1, y2, 1);
            CHECK(std::abs(profile::w2d(y1, y2)) <= std::pow(eta, 1.0 / 6.0));
            CHECK(std::abs(profile::w2d_deriv(y1, y2, 1, 0)) <= std::pow(eta, -1.0 / 3.0));
            CHECK(std::abs(profile::w2d_deriv(y1, y2, 0, 1)) <= std::sqrt(3.0) / 3.0);
            for (int g1 = 0; g1 <= 4; ++g1)
                for (int g2 = 0; g1 + g2 <= 4; ++g2)
                    CHECK(std::abs(profile::w2d_deriv(y1, y2, g1, g2))
                          <= profile::bound_constant(g1, g2) * std::pow(eta, profile::bound_exponent(g1, g2)));
        }
    }
}
