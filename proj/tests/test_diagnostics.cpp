#include "s2shock/diagnostics.hpp"
#include "s2shock/error.hpp"
#include "s2shock/riemann.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace s2shock;
using doctest::Approx;

namespace {

// Exact Burgers slope history 1/(τ₀ − t) over `decades` decades, `per_decade` samples each.
auto burgers_record(double tau0, int decades, int per_decade) -> RunRecord
{
    RunRecord rec;
    rec.status = RunStatus::BlewUp;
    rec.solver.tau0 = tau0;
    const auto b = riemann::betas(rec.solver.gamma);
    for (int k = 0; k <= decades * per_decade; ++k) {
        RunSample s;
        s.step = k;
        s.t_tilde = tau0 * (1.0 - std::pow(10.0, -static_cast<double>(k) / per_decade));
        s.max_slope = 1.0 / (tau0 - s.t_tilde);
        s.tau = tau0;
        s.xi = rec.solver.xi0 + 2.0 * b.beta3 * rec.solver.kappa0() * s.t_tilde;
        s.min_sigma = rec.solver.sigma_inf;
        s.holder = 1.0;
        rec.samples.push_back(s);
    }
    return rec;
}

}  // namespace

TEST_SUITE("diagnostics")
{
    TEST_CASE("exact Burgers history")
    {
        const double tau0 = 1e-2;
        const auto rec = burgers_record(tau0, 4, 40);
        const auto bt = diagnostics::blowup_time(rec);
        CHECK(bt.T_star == Approx(tau0).epsilon(1e-12));
        CHECK(bt.window_samples >= 10);
        const auto rf = diagnostics::rate_fit(rec);
        CHECK(std::abs(rf.exponent + 1.0) <= 1e-6);
        CHECK(rf.decades >= 1.0);
        CHECK(rf.samples >= 10);
        CHECK(bt.T_star > rec.samples.back().t_tilde);
    }

    TEST_CASE("blow-up time is insensitive to sampling cadence")
    {
        const auto rec = burgers_record(1e-2, 4, 80);
        RunRecord half = rec;
        half.samples.clear();
        for (std::size_t i = 0; i < rec.samples.size(); i += 2) half.samples.push_back(rec.samples[i]);
        const double dt = rec.samples.back().t_tilde - rec.samples[rec.samples.size() - 2].t_tilde;
        CHECK(std::abs(diagnostics::blowup_time(rec).T_star - diagnostics::blowup_time(half).T_star) <= 2 * dt);
    }

    TEST_CASE("fits are rejected without growth")
    {
        auto rec = burgers_record(1e-2, 4, 40);
        for (auto& s : rec.samples) s.max_slope = 100.0;
        CHECK_THROWS_AS(diagnostics::blowup_time(rec), Error);
        CHECK_THROWS_AS(diagnostics::rate_fit(rec), Error);
        rec.samples.resize(5);
        CHECK_THROWS_AS(diagnostics::blowup_time(rec), Error);
    }

    TEST_CASE("Holder seminorm of the cube root")
    {
        for (int k : {4, 6, 8}) {
            const std::size_t n = (std::size_t{1} << k) + 1;
            std::vector<double> x(n);
            std::vector<double> f(n);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
                f[i] = std::cbrt(x[i]);
            }
            const double sparse = diagnostics::holder_seminorm(x, f);
            const double dense = diagnostics::holder_seminorm_dense(x, f);
            CHECK(sparse == Approx(std::cbrt(4.0)).epsilon(1e-12));
            CHECK(dense == Approx(sparse).epsilon(1e-12));
        }
    }

    TEST_CASE("Holder seminorm on smooth data is bounded by the dense search")
    {
        std::vector<double> x(200);
        std::vector<double> f(200);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = 0.01 * static_cast<double>(i);
            f[i] = std::sin(3 * x[i]) + 0.2 * x[i] * x[i];
        }
        CHECK(diagnostics::holder_seminorm(x, f) <= diagnostics::holder_seminorm_dense(x, f));
        std::vector<double> c(x.size(), 4.2);
        CHECK(diagnostics::holder_seminorm(x, c) == 0.0);
        CHECK_THROWS_AS(diagnostics::holder_seminorm(x, std::vector<double>(3, 0.0)), Error);
    }

    TEST_CASE("location and vacuum")
    {
        auto rec = burgers_record(1e-2, 3, 20);
        const auto loc = diagnostics::location_report(rec, 100.0, rec.monitor.exterior_delta);
        CHECK(loc.max_drift <= 1e-15);
        CHECK(loc.drift_pass);
        CHECK(loc.drift_budget == Approx(std::pow(100.0, 1.75) * 1e-4));
        CHECK(loc.exterior_budget == Approx(100.0 + 2.0 * std::pow(0.1, -2.0 / 3.0)));
        CHECK_THROWS_AS(diagnostics::location_report(rec, 100.0, 0.05), Error);

        auto v = diagnostics::vacuum_check(rec);
        CHECK(v.min_sigma == rec.solver.sigma_inf);
        CHECK(v.pass);
        rec.samples[7].min_sigma = 0.3 * rec.solver.sigma_inf;
        v = diagnostics::vacuum_check(rec);
        CHECK_FALSE(v.pass);
    }

    TEST_CASE("report flags")
    {
        const auto rec = burgers_record(1e-2, 4, 40);
        auto r = diagnostics::blowup_report(rec);
        CHECK(r.all_pass());
        CHECK(r.pass.at("rate"));
        auto bad = rec;
        for (auto& s : bad.samples) s.holder = 2 * diagnostics::kHolderBound;
        r = diagnostics::blowup_report(bad);
        CHECK_FALSE(r.pass.at("holder"));
        CHECK_FALSE(r.all_pass());
    }
}
