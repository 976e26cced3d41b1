#include "s2shock/error.hpp"
#include "s2shock/geometry.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace s2shock;
using namespace s2shock::geometry;
using doctest::Approx;

namespace {

auto random_skew(std::mt19937_64& g) -> Mat3
{
    return skew_from(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1), testing::uniform(g, -1, 1));
}

}  // namespace

TEST_SUITE("geometry")
{
    TEST_CASE("stereographic projection")
    {
        const double r0 = 1.7;
        auto c = stereo_project({Vec3(0, 0, -r0)}, r0);
        CHECK(c.u.norm() == 0.0);
        c = stereo_project({Vec3(r0, 0, 0)}, r0);
        CHECK(c.u.x() == Approx(2 * r0));
        CHECK(c.u.y() == Approx(0.0));
        CHECK_THROWS_AS(stereo_project({Vec3(0, 0, r0)}, r0), Error);

        auto g = testing::rng(1);
        for (int i = 0; i < 1000; ++i) {
            Vec3 x(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1), testing::uniform(g, -1, 0.9));
            x *= r0 / x.norm();
            if (x.z() > 0.99 * r0) continue;
            const auto back = stereo_unproject(stereo_project({x}, r0));
            CHECK((back.x - x).norm() <= 1e-10);
            CHECK(std::abs(back.x.norm() - r0) <= 1e-12 * r0);
        }
    }

    TEST_CASE("metric factor")
    {
        CHECK(metric_factor({Vec2(0, 0), 2.0}) == 1.0);
        CHECK(metric_factor({Vec2(4, 0), 2.0}) == Approx(0.5));
        double prev = 1.0;
        for (double r = 1; r < 1e6; r *= 3) {
            const double phi = metric_factor({Vec2(r, 0), 1.0});
            CHECK(phi < prev);
            CHECK(phi > 0.0);
            prev = phi;
        }
    }

    TEST_CASE("shock coordinates")
    {
        const Vec2 u(0.3, -1.2);
        CHECK((shock_coords(u, 0.0) - u).norm() == 0.0);
        const Vec2 t = shock_coords(Vec2(1, 2), 1.0);
        CHECK(t.x() == -1.0);
        CHECK(t.y() == 2.0);
        auto g = testing::rng(2);
        for (int i = 0; i < 1000; ++i) {
            const Vec2 v(testing::uniform(g, -5, 5), testing::uniform(g, -5, 5));
            const double psi = testing::uniform(g, -2, 2);
            CHECK((shock_coords_inverse(shock_coords(v, psi), psi) - v).norm() <= 1e-13);
        }
    }

    TEST_CASE("frame at the origin")
    {
        const double psi = 0.4;
        const double r0 = 1.3;
        const Mat3 Q = skew_from(0.2, -0.5, 0.7);
        const auto f = frame_at(Vec2::Zero(), psi, Q, 0.0, r0);
        CHECK(f.J == Approx(1.0));
        CHECK(f.lambda_bracket == Approx(1.0));
        CHECK(f.thetaN == Approx(0.0));
        CHECK(f.thetaT == Approx(psi));
        CHECK(f.g[0] == Approx(-r0 * Q(0, 2)));
        CHECK(f.g[1] == Approx(-r0 * Q(1, 2)));
        CHECK(f.h(0, 1) == Approx(Q(0, 1)));
    }

    TEST_CASE("flat frame")
    {
        auto g = testing::rng(4);
        for (int i = 0; i < 50; ++i) {
            const Vec2 ut(testing::uniform(g, -3, 3), testing::uniform(g, -3, 3));
            const auto f = frame_at(ut, 0.0, Mat3::Zero(), 0.0, 1.0);
            CHECK(f.lambda == 0.0);
            CHECK(f.N.x() == 1.0);
            CHECK(f.N.y() == 0.0);
            CHECK(f.T.x() == 0.0);
            CHECK(f.T.y() == 1.0);
            CHECK(f.g.norm() == 0.0);
            CHECK(f.h.norm() == 0.0);
            CHECK(f.thetaT == Approx(ut.x() / 2.0).epsilon(1e-14));
            // θ(N) is −u₂/(2r₀²) here, not zero.
            CHECK(f.thetaN == Approx(-ut.y() / 2.0).epsilon(1e-14));
        }
    }

    TEST_CASE("frame orthonormality and h structure")
    {
        auto g = testing::rng(5);
        for (int i = 0; i < 1000; ++i) {
            const Vec2 ut(testing::uniform(g, -3, 3), testing::uniform(g, -3, 3));
            const auto f = frame_at(ut, testing::uniform(g, -1, 1), random_skew(g), testing::uniform(g, -1, 1),
                                    testing::uniform(g, 0.5, 2));
            CHECK(std::abs(f.N.norm() - 1) <= 1e-12);
            CHECK(std::abs(f.T.norm() - 1) <= 1e-12);
            CHECK(std::abs(f.N.dot(f.T)) <= 1e-12);
            CHECK(f.phi > 0.0);
            CHECK(f.phi <= 1.0);
            CHECK(f.lambda_bracket >= 1.0);
            CHECK(f.J >= 1.0);
            CHECK(f.h(0, 0) == Approx(f.h(1, 1)));
            CHECK(f.h(0, 1) == Approx(-f.h(1, 0)));
        }
    }

    TEST_CASE("origin table entries")
    {
        const double psi = -0.6;
        const double r0 = 0.8;
        const Mat3 Q = skew_from(0.3, 0.1, -0.4);
        const auto t = origin_derivative_table(psi, Q, r0);
        CHECK(t.pass);
        CHECK(t.max_error <= 1e-6);
        auto find = [&](const std::string& name) {
            for (const auto& e : t.entries)
                if (e.name == name) return e.analytic;
            FAIL("missing entry " << name);
            return 0.0;
        };
        CHECK(find("d11 J") == Approx(1 / (2 * r0 * r0)));
        CHECK(find("d22 J") == Approx(1 / (2 * r0 * r0) + psi * psi));
        CHECK(find("d2 (g1-lambda g2)") == Approx(Q(0, 1) + psi * r0 * Q(1, 2)));
    }

    TEST_CASE("origin table certifies 100 random draws")
    {
        auto g = testing::rng(6);
        for (int i = 0; i < 100; ++i) {
            const double psi = testing::uniform(g, -1, 1);
            const double r0 = testing::uniform(g, 0.5, 2);
            CHECK_NOTHROW(origin_derivative_table(psi, random_skew(g), r0));
        }
    }

    TEST_CASE("rotation step")
    {
        RotationState st;
        st.O = Mat3::Identity();
        st.Q = Mat3::Zero();
        CHECK((rotation_step(st, 0.1).O - Mat3::Identity()).norm() == 0.0);

        const double q = 0.7;
        const double dt = 0.3;
        st.Q = skew_from(0, q, 0);
        const auto next = rotation_step(st, dt);
        Mat3 expected;
        const double c = std::cos(q * dt);
        const double s = std::sin(q * dt);
        expected << c, 0, s, 0, 1, 0, -s, 0, c;
        CHECK((next.O.transpose() - expected).norm() <= 1e-14);

        st.Q(0, 1) = 1.0;
        CHECK_THROWS_AS(rotation_step(st, dt), Error);
    }

    TEST_CASE("composed rotations stay orthogonal")
    {
        auto g = testing::rng(8);
        RotationState st;
        st.Q = random_skew(g);
        for (int i = 0; i < 10000; ++i) st = rotation_step(st, 1e-2);
        CHECK((st.O.transpose() * st.O - Mat3::Identity()).norm() <= 1e-9);
    }
}
