// s2shock: simulate, sweep and verify shock formation for the equivariant
// Euler system on the sphere.

#include "s2shock/diagnostics.hpp"
#include "s2shock/error.hpp"
#include "s2shock/geometry.hpp"
#include "s2shock/harness.hpp"
#include "s2shock/profile.hpp"
#include "s2shock/trajectories.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace s2shock;
using harness::json;

namespace {

struct Globals {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool print_defaults = false;
    std::vector<std::string> overrides;
};

auto resolve(const Globals& g) -> harness::ExperimentConfig
{
    json doc = json::object();
    if (!g.config.empty()) {
        std::ifstream in(g.config);
        if (!in) raise(ErrorKind::ConfigError, "cannot read config " + g.config);
        try {
            doc = json::parse(in, nullptr, true, true);
        } catch (const json::exception& e) {
            raise(ErrorKind::ConfigError, "unparseable config " + g.config + ": " + e.what());
        }
    }
    for (const auto& o : g.overrides) harness::apply_override(doc, o);
    if (g.seed_set) doc["seed"] = g.seed;
    if (!g.out.empty()) doc["output"]["dir"] = g.out;
    return harness::from_json(doc);
}

auto print_summary(const json& s) -> int
{
    std::cout << s.dump(2) << '\n';
    return s["all_pass"].get<bool>() ? 0 : 1;
}

auto cmd_diagnose(const std::string& path) -> int
{
    const auto [rec, cfg] = harness::read_record(path);
    const auto rep = diagnostics::blowup_report(rec);
    std::printf("status               %s\n", to_string(rep.status));
    std::printf("T*                   %.12e\n", rep.T_star);
    std::printf("T* - tau0            %.6e\n", rep.T_star - rep.tau0);
    std::printf("tau (tracker, end)   %.12e\n", rep.tau_end);
    std::printf("rate exponent        %.6f over %.2f decades\n", rep.rate_exponent, rep.rate_decades);
    std::printf("xi*                  %.12f\n", rep.xi_star);
    std::printf("C^1/3 seminorm max   %.6f (bound %.3f)\n", rep.holder_max, diagnostics::kHolderBound);
    std::printf("min sigma            %.6f\n", rep.min_sigma);
    std::printf("location drift       %.6e\n", rep.max_drift);
    std::printf("exterior gradient    %.6e\n", rep.max_exterior_gradient);
    const auto summary = harness::summarize(rec, cfg);
    bool ok = true;
    for (const auto& [k, v] : summary["pass"].items()) {
        std::printf("  %-20s %s\n", k.c_str(), v.get<bool>() ? "pass" : "FAIL");
        ok = ok && v.get<bool>();
    }
    return ok ? 0 : 1;
}

auto cmd_profile_table(double y1_min, double y1_max, double y2_min, double y2_max, int n) -> int
{
    std::printf("y1,y2,W,dW1,dW2,residual\n");
    auto at = [n](double lo, double hi, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
    const int n2 = y2_min == y2_max ? 1 : n;
    for (int j = 0; j < n2; ++j) {
        const double y2 = at(y2_min, y2_max, j);
        for (int i = 0; i < n; ++i) {
            const double y1 = at(y1_min, y1_max, i);
            std::printf("%.17g,%.17g,%.17g,%.17g,%.17g,%.3e\n", y1, y2, profile::w2d(y1, y2),
                        profile::w2d_deriv(y1, y2, 1, 0), profile::w2d_deriv(y1, y2, 0, 1),
                        profile::selfsimilar_burgers_residual(y1, y2));
        }
    }
    return 0;
}

auto cmd_origin_table(double psi, double q12, double q13, double q23, double r0, double tol) -> int
{
    const auto table = geometry::origin_derivative_table(psi, geometry::skew_from(q12, q13, q23), r0, tol, false);
    std::printf("%-28s %22s %22s %10s\n", "quantity", "analytic", "finite-difference", "error");
    for (const auto& e : table.entries)
        std::printf("%-28s %22.14e %22.14e %10.2e\n", e.name.c_str(), e.analytic, e.numeric, e.error);
    std::printf("max error %.3e  tolerance %.1e  %s\n", table.max_error, tol, table.pass ? "pass" : "FAIL");
    return table.pass ? 0 : 1;
}

auto cmd_check_geometry(int draws, std::uint64_t seed, double tol) -> int
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    double worst = 0.0;
    std::string worst_name;
    int failures = 0;
    for (int k = 0; k < draws; ++k) {
        const double psi = unit(rng);
        const auto Q = geometry::skew_from(unit(rng), unit(rng), unit(rng));
        const double r0 = radius(rng);
        const auto table = geometry::origin_derivative_table(psi, Q, r0, tol, false);
        if (!table.pass) ++failures;
        for (const auto& e : table.entries)
            if (e.error > worst) {
                worst = e.error;
                worst_name = e.name;
            }
    }
    std::printf("draws %d  failures %d  worst error %.3e (%s)  tolerance %.1e\n", draws, failures, worst,
                worst_name.c_str(), tol);
    return failures == 0 ? 0 : 1;
}

auto read_seeds(const std::string& path) -> std::vector<std::pair<double, double>>
{
    std::ifstream in(path);
    if (!in) raise(ErrorKind::IoError, "cannot read seeds file " + path);
    std::vector<std::pair<double, double>> seeds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 's') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double s1 = 0.0;
        double y0 = 0.0;
        if (!(is >> s1 >> y0)) raise(ErrorKind::IoError, "malformed seed line '" + line + "'");
        seeds.emplace_back(s1, y0);
    }
    return seeds;
}

auto cmd_trajectories(const std::string& run, const std::string& seeds_path, const std::string& out, double tol) -> int
{
    const auto [rec, cfg] = harness::read_record(run);
    if (rec.snapshots.empty()) raise(ErrorKind::IoError, "run has no snapshots; set diagnostics.snapshot_every");
    const auto field = trajectories::make_frozen_field(rec);
    const auto seeds = read_seeds(seeds_path);
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) raise(ErrorKind::IoError, "cannot open " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << "seed,s1,y0,s,phi,growth_margin_1_3,weighted_p0.5,weighted_p1,weighted_p2\n";
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto [s1, y0] = seeds[k];
        trajectories::IntegrateOptions opt;
        opt.tol = tol;
        const auto p = trajectories::integrate_trajectory([&](double s, double y) { return field.V_W(s, y); }, s1, y0,
                                                          field.s_max(), opt);
        const double g = trajectories::growth_certificate(p, 1.0 / 3.0);
        const double w1 = trajectories::weighted_integral(p, 0.5);
        const double w2 = trajectories::weighted_integral(p, 1.0);
        const double w3 = trajectories::weighted_integral(p, 2.0);
        for (std::size_t i = 0; i < p.s.size(); ++i) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, s1, y0, p.s[i],
                          p.phi[i], g, w1, w2, w3);
            os << buf;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Shock formation laboratory for the equivariant Euler system on the sphere"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "JSON config file");
    app.add_option("--out", g.out, "Output directory");
    app.add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { g.seed = v; g.seed_set = true; }, "RNG seed");
    app.add_flag("--print-defaults", g.print_defaults, "Print the resolved config and exit");
    app.add_option("--set", g.overrides, "Override a config key, e.g. solver.tau0=5e-3");

    auto* simulate = app.add_subcommand("simulate", "Run one experiment");
    int emit_selfsim = -1;
    int emit_fields = -1;
    simulate->add_option("--emit-selfsim", emit_selfsim, "Write self-similar CSV rows every N records");
    simulate->add_option("--emit-fields", emit_fields, "Write physical field CSV rows every N records");

    auto* sweep = app.add_subcommand("sweep", "Run the sweep cross product");

    auto* diagnose = app.add_subcommand("diagnose", "Report diagnostics for a run record");
    std::string record;
    diagnose->add_option("record", record, "run.jsonl or run directory")->required();

    auto* profile = app.add_subcommand("profile", "Self-similar profile utilities");
    auto* table = profile->add_subcommand("table", "Tabulate the profile on an n-by-n grid");
    profile->require_subcommand(1);
    double y1_min = -10.0;
    double y1_max = 10.0;
    double y2_min = 0.0;
    double y2_max = 0.0;
    int n = 21;
    table->add_option("--y1min", y1_min);
    table->add_option("--y1max", y1_max);
    table->add_option("--y2min", y2_min);
    table->add_option("--y2max", y2_max);
    table->add_option("--n", n)->check(CLI::PositiveNumber);

    auto* geometry = app.add_subcommand("check-geometry", "Certify the origin derivative table");
    int draws = 100;
    double tol = 1e-6;
    double psi = 0.0;
    double q12 = 0.0;
    double q13 = 0.0;
    double q23 = 0.0;
    double r0 = 1.0;
    geometry->add_option("--draws", draws, "Random draws when no point is given")->check(CLI::PositiveNumber);
    geometry->add_option("--tol", tol);
    auto* o_psi = geometry->add_option("--psi", psi);
    auto* o_q12 = geometry->add_option("--q12", q12);
    auto* o_q13 = geometry->add_option("--q13", q13);
    auto* o_q23 = geometry->add_option("--q23", q23);
    auto* o_r0 = geometry->add_option("--r0", r0)->check(CLI::PositiveNumber);

    auto* traj = app.add_subcommand("trajectories", "Integrate trajectories through frozen run fields");
    std::string from_run;
    std::string seeds;
    std::string traj_out;
    double traj_tol = 1e-10;
    traj->add_option("--from-run", from_run, "run.jsonl or run directory")->required();
    traj->add_option("--seeds", seeds, "CSV of s1,y0 pairs")->required();
    traj->add_option("--csv", traj_out, "Output CSV (stdout when omitted)");
    traj->add_option("--tol", traj_tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (g.print_defaults) {
            std::cout << harness::to_json(resolve(g)).dump(2) << '\n';
            return 0;
        }
        if (*simulate) {
            auto cfg = resolve(g);
            if (emit_selfsim >= 0) cfg.emit_selfsim = emit_selfsim;
            if (emit_fields >= 0) cfg.emit_fields = emit_fields;
            const auto out = harness::run_experiment(cfg, cfg.out_dir);
            return print_summary(out.summary);
        }
        if (*sweep) {
            const auto cfg = resolve(g);
            const auto runs = harness::expand_sweep(cfg);
            std::cerr << "sweep: " << runs.size() << " runs\n";
            const auto rows = harness::sweep(cfg, cfg.out_dir);
            bool ok = true;
            for (const auto& r : rows) {
                std::printf("%s tau0=%-10.4g n=%-6d %-18s T*-tau0=%-12.5e rate=%-9.5f %s%s\n", r.hash.c_str(), r.tau0,
                            r.n_cells, r.status.c_str(), r.T_minus_tau0, r.rate_exponent, r.all_pass ? "pass" : "FAIL",
                            r.error.empty() ? "" : (" " + r.error).c_str());
                ok = ok && r.all_pass;
            }
            if (cfg.sweep.tau0.size() >= 2) {
                try {
                    std::printf("log-log slope of |T*-tau0| vs tau0: %.4f\n", harness::time_scaling_slope(rows));
                } catch (const Error& e) {
                    std::printf("time scaling undefined: %s\n", e.what());
                }
            }
            return ok ? 0 : 1;
        }
        if (*diagnose) return cmd_diagnose(record);
        if (*table) return cmd_profile_table(y1_min, y1_max, y2_min, y2_max, n);
        if (*geometry) {
            if (*o_psi || *o_q12 || *o_q13 || *o_q23 || *o_r0) return cmd_origin_table(psi, q12, q13, q23, r0, tol);
            return cmd_check_geometry(draws, g.seed, tol);
        }
        if (*traj) return cmd_trajectories(from_run, seeds, traj_out, traj_tol);
        std::cout << app.help() << '\n';
        return 0;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
