#include "s2shock/error.hpp"
#include "s2shock/riemann.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace s2shock;
using namespace s2shock::riemann;
using geometry::Vec2;
using doctest::Approx;

namespace {

struct Draw {
    PhysVars p;
    GeometryFrame f;
    BetaConstants b;
    double psi_dot = 0.0;
};

auto draw(std::mt19937_64& g) -> Draw
{
    Draw d;
    d.b = betas(testing::uniform(g, 1.05, 3.0));
    d.p = {testing::uniform(g, -2, 2), testing::uniform(g, -2, 2), testing::uniform(g, 0.1, 3)};
    d.psi_dot = testing::uniform(g, -1, 1);
    const auto Q = geometry::skew_from(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1),
                                       testing::uniform(g, -1, 1));
    d.f = geometry::frame_at(Vec2(testing::uniform(g, -1, 1), testing::uniform(g, -1, 1)),
                             testing::uniform(g, -1, 1), Q, d.psi_dot, testing::uniform(g, 0.5, 2));
    return d;
}

}  // namespace

TEST_SUITE("riemann")
{
    TEST_CASE("betas")
    {
        auto b = betas(3.0);
        CHECK(b.alpha == 1.0);
        CHECK(b.beta1 == Approx(0.5));
        CHECK(b.beta2 == Approx(0.0));
        CHECK(b.beta3 == Approx(0.5));
        b = betas(1.4);
        CHECK(b.alpha == Approx(0.2));
        CHECK(b.beta1 == Approx(5.0 / 6.0));
        CHECK(b.beta2 == Approx(2.0 / 3.0));
        CHECK(b.beta3 == Approx(1.0 / 6.0));
        for (double gamma : {1.1, 1.4, 5.0 / 3.0, 2.0, 3.0, 7.0}) {
            b = betas(gamma);
            CHECK(b.beta2 + 2 * b.beta3 == Approx(1.0));
            CHECK(b.beta1 + b.beta3 == Approx(1.0));
        }
        CHECK_THROWS_AS(betas(1.0), Error);
        CHECK_THROWS_AS(betas(0.5), Error);
    }

    TEST_CASE("Riemann variables")
    {
        auto r = to_riemann({1, 0, 2}, 0.0);
        CHECK(r.w == 3.0);
        CHECK(r.z == -1.0);
        CHECK(r.a == 0.0);
        r = to_riemann({1, 1, 0}, 1.0);
        CHECK(r.w == Approx(0.0));
        CHECK(r.z == Approx(0.0));
        CHECK(r.a == Approx(std::sqrt(2.0)));

        auto p = to_phys({3, -1, 0}, 0.0);
        CHECK(p.V1 == Approx(1.0));
        CHECK(p.V2 == Approx(0.0));
        CHECK(p.S == Approx(2.0));
        p = to_phys({0, 0, std::sqrt(2.0)}, 1.0);
        CHECK(p.V1 == Approx(1.0));
        CHECK(p.V2 == Approx(1.0));
        CHECK(p.S == 0.0);
        CHECK(to_phys({0.7, 0.7, 0.0}, 0.3).S == 0.0);

        auto g = testing::rng(21);
        for (int i = 0; i < 1000; ++i) {
            const PhysVars q{testing::uniform(g, -3, 3), testing::uniform(g, -3, 3), testing::uniform(g, 0, 3)};
            const double lam = testing::uniform(g, -2, 2);
            const auto rv = to_riemann(q, lam);
            CHECK(rv.w - rv.z == Approx(2 * q.S).epsilon(1e-15));
            const auto back = to_phys(rv, lam);
            CHECK(std::abs(back.V1 - q.V1) <= 1e-12);
            CHECK(std::abs(back.V2 - q.V2) <= 1e-12);
            CHECK(std::abs(back.S - q.S) <= 1e-12);
        }
    }

    TEST_CASE("B inverse and derivative")
    {
        for (double lam : {-1.5, 0.0, 0.4, 3.0}) {
            CHECK((B_matrix(lam) * B_inverse(lam) - Mat3::Identity()).norm() <= 1e-14);
            const double h = 1e-5;
            const Mat3 fd = (B_matrix(lam + h) - B_matrix(lam - h)) / (2 * h);
            CHECK((fd - B_lambda_derivative(lam)).norm() <= 1e-9);
        }
    }

    TEST_CASE("diagonalization")
    {
        auto g = testing::rng(22);
        for (int i = 0; i < 1000; ++i) {
            const auto d = draw(g);
            const auto m = assemble_matrices(d.p, d.f, d.b, d.psi_dot);
            CHECK((m.A_R_u1t - m.B * m.A_P_u1t * m.B_inv).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((m.A_R_u2t - m.B * m.A_P_u2t * m.B_inv).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((m.A_P_u1 - m.A_P_u1.transpose()).norm() == 0.0);
            CHECK((m.A_P_u2 - m.A_P_u2.transpose()).norm() == 0.0);

            Eigen::SelfAdjointEigenSolver<Mat3> es(m.A_P_u1t);
            std::array<double, 3> ev{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
            std::array<double, 3> diag{m.A_R_u1t(0, 0), m.A_R_u1t(1, 1), m.A_R_u1t(2, 2)};
            std::sort(ev.begin(), ev.end());
            std::sort(diag.begin(), diag.end());
            for (int k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - diag[k]) <= 1e-8);

            const auto r = to_riemann(d.p, d.f.lambda);
            CHECK(m.A_R_u1t(0, 0) - d.f.G == Approx(d.f.J * (r.w + d.b.beta2 * r.z)));
            CHECK(m.A_R_u1t(1, 1) - d.f.G == Approx(d.f.J * (d.b.beta2 * r.w + r.z)));
            CHECK(m.A_R_u1t(2, 2) - d.f.G == Approx(d.f.J * d.b.beta1 * (r.w + r.z)));
        }
    }

    TEST_CASE("forcing cross-checks")
    {
        auto g = testing::rng(23);
        for (int i = 0; i < 200; ++i) {
            const auto d = draw(g);
            const auto m = assemble_matrices(d.p, d.f, d.b, d.psi_dot);
            CHECK((m.F_P - m.F_P_expanded).norm() <= 1e-10 * std::max(1.0, m.F_P.norm()));
            CHECK((m.F_R - m.F_R_route).norm() <= 1e-9 * std::max(1.0, m.F_R.norm()));
        }
    }

    TEST_CASE("isotropic transport at the flat origin")
    {
        const auto f = geometry::frame_at(Vec2::Zero(), 0.0, Mat3::Zero(), 0.0, 1.0);
        const auto b = betas(1.4);
        const auto m = assemble_matrices({0.8, 0.0, 0.0}, f, b, 0.0);
        CHECK((m.A_P_u1t - 2 * b.beta1 * 0.8 * Mat3::Identity()).norm() <= 1e-15);
    }

    TEST_CASE("vorticity")
    {
        const auto f0 = geometry::frame_at(Vec2::Zero(), 0.0, Mat3::Zero(), 0.0, 1.0);
        CHECK(vorticity(0.0, 0.0, f0) == 0.0);
        CHECK(vorticity(1.0, 0.0, f0) == Approx(1.0));
    }

    TEST_CASE("vorticity matches a finite-difference curl")
    {
        const double psi = 0.35;
        const double r0 = 1.2;
        const Mat3 Q = geometry::skew_from(0.2, -0.1, 0.3);
        const auto a_field = [](const Vec2& ut) { return std::sin(ut.x()) + 0.5 * ut.y() * ut.y(); };
        const auto v1_field = [](const Vec2& ut) { return std::cos(ut.x() + 2 * ut.y()); };
        const auto phi_at = [&](const Vec2& ut) { return geometry::frame_at(ut, psi, Q, 0.0, r0).phi; };
        const Vec2 p(0.4, -0.3);
        const double h = 1e-4;
        const Vec2 e1(h, 0);
        const Vec2 e2(0, h);
        const auto f = geometry::frame_at(p, psi, Q, 0.0, r0);
        const auto phia = [&](const Vec2& u) { return phi_at(u) * a_field(u); };
        const auto phiv = [&](const Vec2& u) { return phi_at(u) * v1_field(u); };
        const double d1_phia = (phia(p + e1) - phia(p - e1)) / (2 * h);
        const double d2_phiv = (phiv(p + e2) - phiv(p - e2)) / (2 * h);
        const double reference = (f.lambda_bracket * d1_phia - d2_phiv) / (f.phi * f.phi);
        const double da = std::cos(p.x());
        CHECK(vorticity(da, d2_phiv, f, a_field(p)) == Approx(reference).epsilon(1e-7));
    }
}
