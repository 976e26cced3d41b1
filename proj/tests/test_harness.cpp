#include "s2shock/error.hpp"
#include "s2shock/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace s2shock;
using namespace s2shock::harness;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

auto scratch(const std::string& name) -> fs::path
{
    const fs::path p = fs::temp_directory_path() / ("s2shock_test_" + name);
    fs::remove_all(p);
    return p;
}

auto steady_config() -> ExperimentConfig
{
    ExperimentConfig c;
    c.solver.initial = InitialKind::Steady;
    c.solver.n_cells = 64;
    c.monitor.bootstrap_every = 0;
    return c;
}

auto slurp(const fs::path& p) -> std::string
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto config_error(const std::function<void()>& f) -> bool
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == ErrorKind::ConfigError;
    }
    return false;
}

}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("schema validation")
    {
        CHECK(config_error([] { from_json(json::parse(R"({"solver": {"gama": 1.4}})")); }));
        CHECK(config_error([] { from_json(json::parse(R"({"solver": {"gamma": "heavy"}})")); }));
        CHECK(config_error([] { from_json(json::parse(R"({"solver": {"scheme": "spectral"}})")); }));
        CHECK(config_error([] { from_json(json::parse(R"({"extra": 1})")); }));
        const auto c = from_json(json::parse(R"({"solver": {"gamma": 3, "scheme": "eulerian"}, "seed": 9})"));
        CHECK(c.solver.gamma == 3.0);
        CHECK(c.solver.scheme == Scheme::Eulerian);
        CHECK(c.seed == 9);
        CHECK(c.solver.tau0 == ExperimentConfig{}.solver.tau0);
    }

    TEST_CASE("defaults round trip")
    {
        const ExperimentConfig d;
        CHECK(to_json(from_json(to_json(d))) == to_json(d));
    }

    TEST_CASE("dotted overrides")
    {
        json doc = to_json(ExperimentConfig{});
        apply_override(doc, "solver.tau0=0.005");
        apply_override(doc, "solver.scheme=eulerian");
        apply_override(doc, "sweep.tau0=[0.01,0.005]");
        const auto c = from_json(doc);
        CHECK(c.solver.tau0 == 0.005);
        CHECK(c.solver.scheme == Scheme::Eulerian);
        CHECK(c.sweep.tau0.size() == 2);
        CHECK(config_error([&] {
            json d2 = doc;
            apply_override(d2, "solver.nope=1");
            from_json(d2);
        }));
        CHECK(config_error([&] { apply_override(doc, "no_equals_sign"); }));
    }

    TEST_CASE("config hash")
    {
        CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
        CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
        ExperimentConfig a;
        ExperimentConfig b;
        b.out_dir = "elsewhere";
        b.emit_selfsim = 5;
        CHECK(config_hash(a) == config_hash(b));
        CHECK(config_hash(a).size() == 16);
        b.solver.tau0 = 0.005;
        CHECK(config_hash(a) != config_hash(b));
    }

    TEST_CASE("sample json round trip")
    {
        RunSample s;
        s.step = 12;
        s.t_tilde = 0.00123456789012345;
        s.max_slope = 1234.5;
        s.profile_distance = std::array<double, 3>{1e-3, 2e-3, 3e-3};
        BootstrapSummary bs;
        bs.margins["W0"] = 0.25;
        bs.all_pass = true;
        s.bootstrap = bs;
        const auto j = sample_to_json(s);
        CHECK(j["schema_version"] == kSchemaVersion);
        CHECK(j["type"] == "sample");
        const auto back = sample_from_json(json::parse(j.dump()));
        CHECK(back.step == 12);
        CHECK(back.t_tilde == s.t_tilde);
        CHECK(back.max_slope == s.max_slope);
        REQUIRE(back.profile_distance.has_value());
        CHECK((*back.profile_distance)[2] == 3e-3);
        REQUIRE(back.bootstrap.has_value());
        CHECK(back.bootstrap->margins.at("W0") == 0.25);
    }

    TEST_CASE("steady experiment and determinism")
    {
        const auto dir1 = scratch("steady1");
        const auto dir2 = scratch("steady2");
        const auto cfg = steady_config();
        const auto out = run_experiment(cfg, dir1);
        CHECK(out.record.status == RunStatus::MaxTime);
        CHECK(out.summary["status"] == "max_time");
        CHECK(out.summary["all_pass"] == true);
        for (const char* f : {"run.jsonl", "summary.json", "config.json", "metadata.json"})
            CHECK(fs::exists(dir1 / f));
        run_experiment(cfg, dir2);
        CHECK(slurp(dir1 / "run.jsonl") == slurp(dir2 / "run.jsonl"));
        CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));

        const auto [rec, back] = read_record(dir1);
        CHECK(rec.samples.size() == out.record.samples.size());
        CHECK(rec.status == RunStatus::MaxTime);
        CHECK(config_hash(back) == config_hash(cfg));
        CHECK(rec.samples.back().t_tilde == out.record.samples.back().t_tilde);
    }

    TEST_CASE("empty sweep is a single run")
    {
        const auto cfg = steady_config();
        const auto runs = expand_sweep(cfg);
        REQUIRE(runs.size() == 1);
        CHECK(config_hash(runs[0]) == config_hash(cfg));
        const auto dir = scratch("sweep_single");
        const auto rows = sweep(cfg, dir);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].status == "max_time");
        CHECK(slurp(dir / rows[0].hash / "summary.json") == run_experiment(cfg, scratch("single")).summary.dump(2) + "\n");
    }

    TEST_CASE("sweep isolates failing runs")
    {
        auto cfg = steady_config();
        cfg.sweep.n_cells = {64, 8, 128};
        cfg.sweep.threads = 2;
        CHECK(expand_sweep(cfg).size() == 3);
        const auto dir = scratch("sweep_iso");
        const auto rows = sweep(cfg, dir);
        REQUIRE(rows.size() == 3);
        int errors = 0;
        for (const auto& r : rows) {
            if (r.status == "error") {
                ++errors;
                CHECK(r.n_cells == 8);
                CHECK_FALSE(r.error.empty());
            } else {
                CHECK(r.status == "max_time");
            }
        }
        CHECK(errors == 1);
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].hash < rows[i].hash);
        CHECK(fs::exists(dir / "sweep.csv"));
    }

    TEST_CASE("time scaling slope")
    {
        std::vector<SweepRow> rows;
        for (double t : {1e-2, 5e-3, 2.5e-3}) {
            SweepRow r;
            r.status = "blew_up";
            r.tau0 = t;
            r.T_minus_tau0 = -0.04 * t * t;
            rows.push_back(r);
        }
        CHECK(time_scaling_slope(rows) == Approx(2.0).epsilon(1e-12));
    }
}
