#include "s2shock/harness.hpp"

#include "s2shock/diagnostics.hpp"
#include "s2shock/equivariant.hpp"
#include "s2shock/error.hpp"
#include "s2shock/modulation.hpp"
#include "s2shock/profile.hpp"
#include "s2shock/selfsim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace s2shock::harness {

namespace fs = std::filesystem;

namespace {

auto num(double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); }

auto get_num(const json& j, const char* key) -> double
{
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nan("");
    return it->get<double>();
}

auto scheme_from(const std::string& s) -> Scheme
{
    if (s == "lagrangian") return Scheme::Lagrangian;
    if (s == "eulerian") return Scheme::Eulerian;
    raise(ErrorKind::ConfigError, "solver.scheme must be lagrangian or eulerian");
}

auto initial_from(const std::string& s) -> InitialKind
{
    if (s == "profile") return InitialKind::Profile;
    if (s == "steady") return InitialKind::Steady;
    if (s == "dip") return InitialKind::Dip;
    raise(ErrorKind::ConfigError, "solver.initial must be profile, steady or dip");
}

auto tracker_from(const std::string& s) -> Tracker
{
    if (s == "extremal") return Tracker::Extremal;
    if (s == "ode") return Tracker::Ode;
    raise(ErrorKind::ConfigError, "modulation.tracker must be extremal or ode");
}

auto status_from(const std::string& s) -> RunStatus
{
    for (auto st : {RunStatus::BlewUp, RunStatus::MaxTime, RunStatus::Vacuum, RunStatus::NumericalFailure,
                    RunStatus::PoleSingularity, RunStatus::Running})
        if (s == to_string(st)) return st;
    raise(ErrorKind::IoError, "unknown run status '" + s + "'");
}

// Reject keys absent from the defaults and values whose JSON type differs.
void check_schema(const json& defaults, const json& doc, const std::string& path)
{
    if (!doc.is_object()) raise(ErrorKind::ConfigError, (path.empty() ? "config" : path) + " must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        const auto d = defaults.find(it.key());
        if (d == defaults.end()) raise(ErrorKind::ConfigError, "unknown key '" + key + "'");
        const json& v = it.value();
        if (d->is_object()) {
            check_schema(*d, v, key);
        } else if (d->is_boolean()) {
            if (!v.is_boolean()) raise(ErrorKind::ConfigError, key + " must be a boolean");
        } else if (d->is_number_integer() || d->is_number_unsigned()) {
            if (!v.is_number_integer() && !v.is_number_unsigned()) raise(ErrorKind::ConfigError, key + " must be an integer");
        } else if (d->is_number()) {
            if (!v.is_number()) raise(ErrorKind::ConfigError, key + " must be a number");
        } else if (d->is_string()) {
            if (!v.is_string()) raise(ErrorKind::ConfigError, key + " must be a string");
        } else if (d->is_array()) {
            if (!v.is_array()) raise(ErrorKind::ConfigError, key + " must be an array");
            for (const auto& e : v)
                if (!e.is_number()) raise(ErrorKind::ConfigError, key + " must hold numbers");
        }
    }
}

auto utc_now() -> std::string
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) raise(ErrorKind::IoError, "write failed for " + path.string());
}

auto fmt(double v) -> std::string
{
    if (!std::isfinite(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

// ============================================================================
// Config
// ============================================================================

auto to_json(const ExperimentConfig& c) -> json
{
    const auto& s = c.solver;
    json j;
    j["solver"] = {
        {"gamma", s.gamma},
        {"sigma_inf", s.sigma_inf},
        {"xi0", s.xi0},
        {"tau0", s.tau0},
        {"n_cells", s.n_cells},
        {"n_nodes", s.n_nodes},
        {"node_grading", s.node_grading},
        {"cfl", s.cfl},
        {"jet_cfl", s.jet_cfl},
        {"flat_mode", s.flat_mode},
        {"modulation_coupling", s.modulation_coupling},
        {"blowup_slope_cap", s.blowup_slope_cap},
        {"dt_floor", s.dt_floor},
        {"t_max", s.t_max},
        {"domain_half_width", s.domain_half_width},
        {"support_half_width", s.support_half_width},
        {"plateau_half_width", s.plateau_half_width},
        {"pole_margin", s.pole_margin},
        {"enforce_regime", s.enforce_regime},
        {"scheme", to_string(s.scheme)},
        {"initial", to_string(s.initial)},
        {"dip_amplitude", s.dip_amplitude},
        {"record_every", s.record_every},
    };
    j["modulation"] = {{"tracker", to_string(c.modulation.tracker)}, {"validate_every", c.modulation.validate_every}};
    const auto& m = c.monitor;
    j["diagnostics"] = {
        {"M", m.M},
        {"l", m.l},
        {"L", m.L},
        {"exterior_delta", m.exterior_delta},
        {"bootstrap_every", m.bootstrap_every},
        {"snapshot_every", m.snapshot_every},
        {"snapshot_growth", m.snapshot_growth},
    };
    j["sweep"] = {
        {"gamma", c.sweep.gamma},
        {"tau0", c.sweep.tau0},
        {"xi0", c.sweep.xi0},
        {"n_cells", c.sweep.n_cells},
        {"threads", c.sweep.threads},
    };
    j["output"] = {{"dir", c.out_dir}, {"emit_selfsim", c.emit_selfsim}, {"emit_fields", c.emit_fields}};
    j["seed"] = c.seed;
    return j;
}

auto from_json(const json& doc) -> ExperimentConfig
{
    json d = to_json(ExperimentConfig{});
    check_schema(d, doc, "");
    d.merge_patch(doc);

    ExperimentConfig c;
    const auto& s = d["solver"];
    auto& o = c.solver;
    o.gamma = s["gamma"].get<double>();
    o.sigma_inf = s["sigma_inf"].get<double>();
    o.xi0 = s["xi0"].get<double>();
    o.tau0 = s["tau0"].get<double>();
    o.n_cells = s["n_cells"].get<int>();
    o.n_nodes = s["n_nodes"].get<int>();
    o.node_grading = s["node_grading"].get<bool>();
    o.cfl = s["cfl"].get<double>();
    o.jet_cfl = s["jet_cfl"].get<double>();
    o.flat_mode = s["flat_mode"].get<bool>();
    o.modulation_coupling = s["modulation_coupling"].get<bool>();
    o.blowup_slope_cap = s["blowup_slope_cap"].get<double>();
    o.dt_floor = s["dt_floor"].get<double>();
    o.t_max = s["t_max"].get<double>();
    o.domain_half_width = s["domain_half_width"].get<double>();
    o.support_half_width = s["support_half_width"].get<double>();
    o.plateau_half_width = s["plateau_half_width"].get<double>();
    o.pole_margin = s["pole_margin"].get<double>();
    o.enforce_regime = s["enforce_regime"].get<bool>();
    o.scheme = scheme_from(s["scheme"].get<std::string>());
    o.initial = initial_from(s["initial"].get<std::string>());
    o.dip_amplitude = s["dip_amplitude"].get<double>();
    o.record_every = s["record_every"].get<int>();

    c.modulation.tracker = tracker_from(d["modulation"]["tracker"].get<std::string>());
    c.modulation.validate_every = d["modulation"]["validate_every"].get<int>();
    if (c.modulation.validate_every < 1) raise(ErrorKind::ConfigError, "modulation.validate_every must be at least 1");

    const auto& m = d["diagnostics"];
    c.monitor.M = m["M"].get<double>();
    c.monitor.l = m["l"].get<double>();
    c.monitor.L = m["L"].get<double>();
    c.monitor.exterior_delta = m["exterior_delta"].get<double>();
    c.monitor.bootstrap_every = m["bootstrap_every"].get<int>();
    c.monitor.snapshot_every = m["snapshot_every"].get<int>();
    c.monitor.snapshot_growth = m["snapshot_growth"].get<std::vector<double>>();
    if (!(c.monitor.M > 1.0)) raise(ErrorKind::ConfigError, "diagnostics.M must exceed 1");
    if (c.monitor.l < 0.0 || c.monitor.L < 0.0) raise(ErrorKind::ConfigError, "diagnostics.l and diagnostics.L must be non-negative");
    if (!(c.monitor.exterior_delta > 0.0)) raise(ErrorKind::ConfigError, "diagnostics.exterior_delta must be positive");
    if (c.monitor.bootstrap_every < 0 || c.monitor.snapshot_every < 0)
        raise(ErrorKind::ConfigError, "diagnostics cadences must be non-negative");

    const auto& w = d["sweep"];
    c.sweep.gamma = w["gamma"].get<std::vector<double>>();
    c.sweep.tau0 = w["tau0"].get<std::vector<double>>();
    c.sweep.xi0 = w["xi0"].get<std::vector<double>>();
    for (const auto& v : w["n_cells"]) {
        if (!v.is_number_integer()) raise(ErrorKind::ConfigError, "sweep.n_cells must hold integers");
        c.sweep.n_cells.push_back(v.get<int>());
    }
    c.sweep.threads = w["threads"].get<int>();

    c.out_dir = d["output"]["dir"].get<std::string>();
    c.emit_selfsim = d["output"]["emit_selfsim"].get<int>();
    c.emit_fields = d["output"]["emit_fields"].get<int>();
    if (c.emit_selfsim < 0 || c.emit_fields < 0) raise(ErrorKind::ConfigError, "output cadences must be non-negative");
    c.seed = d["seed"].get<std::uint64_t>();

    equivariant::validate(c.solver);
    for (const auto& e : expand_sweep(c)) equivariant::validate(e.solver);
    return c;
}

auto load_config(const fs::path& path) -> ExperimentConfig
{
    std::ifstream in(path);
    if (!in) raise(ErrorKind::ConfigError, "cannot read config " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        raise(ErrorKind::ConfigError, "unparseable config " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) raise(ErrorKind::ConfigError, "override must look like key.path=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) raise(ErrorKind::ConfigError, "empty component in override key '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

auto fnv1a64(const std::string& bytes) -> std::uint64_t
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

auto config_hash(const ExperimentConfig& cfg) -> std::string
{
    json j = to_json(cfg);
    j.erase("output");
    j.erase("sweep");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

// ============================================================================
// Records
// ============================================================================

auto sample_to_json(const RunSample& s) -> json
{
    json j;
    j["schema_version"] = kSchemaVersion;
    j["type"] = "sample";
    j["step"] = s.step;
    j["t"] = num(s.t_tilde);
    j["dt"] = num(s.dt);
    j["s"] = num(s.s);
    j["kappa"] = num(s.kappa);
    j["tau"] = num(s.tau);
    j["xi"] = num(s.xi);
    j["xi_frame"] = num(s.xi_frame);
    j["frame_speed"] = num(s.frame_speed);
    j["max_slope"] = num(s.max_slope);
    j["slope_location"] = num(s.slope_location);
    j["min_sigma"] = num(s.min_sigma);
    j["holder"] = num(s.holder);
    j["support_extent"] = num(s.support_extent);
    j["exterior_gradient"] = num(s.exterior_gradient);
    j["dkappa_ode"] = num(s.dkappa_ode);
    j["dtau_ode"] = num(s.dtau_ode);
    j["dxi_ode"] = num(s.dxi_ode);
    j["kappa_ode"] = num(s.kappa_ode);
    j["tau_ode"] = num(s.tau_ode);
    j["xi_ode"] = num(s.xi_ode);
    j["W0"] = num(s.W0);
    j["dW0"] = num(s.dW0);
    j["d3W0"] = num(s.d3W0);
    j["z_shift_max"] = num(s.z_shift_max);
    if (s.profile_distance) {
        const auto& d = *s.profile_distance;
        j["profile_distance"] = json::array({num(d[0]), num(d[1]), num(d[2])});
    } else {
        j["profile_distance"] = nullptr;
    }
    if (s.bootstrap) {
        json m = json::object();
        for (const auto& [k, v] : s.bootstrap->margins) m[k] = num(v);
        j["bootstrap"] = {{"all_pass", s.bootstrap->all_pass}, {"margins", m}};
    } else {
        j["bootstrap"] = nullptr;
    }
    return j;
}

auto sample_from_json(const json& j) -> RunSample
{
    RunSample s;
    s.step = j.at("step").get<int>();
    s.t_tilde = get_num(j, "t");
    s.dt = get_num(j, "dt");
    s.s = get_num(j, "s");
    s.kappa = get_num(j, "kappa");
    s.tau = get_num(j, "tau");
    s.xi = get_num(j, "xi");
    s.xi_frame = get_num(j, "xi_frame");
    s.frame_speed = get_num(j, "frame_speed");
    s.max_slope = get_num(j, "max_slope");
    s.slope_location = get_num(j, "slope_location");
    s.min_sigma = get_num(j, "min_sigma");
    s.holder = get_num(j, "holder");
    s.support_extent = get_num(j, "support_extent");
    s.exterior_gradient = get_num(j, "exterior_gradient");
    s.dkappa_ode = get_num(j, "dkappa_ode");
    s.dtau_ode = get_num(j, "dtau_ode");
    s.dxi_ode = get_num(j, "dxi_ode");
    s.kappa_ode = get_num(j, "kappa_ode");
    s.tau_ode = get_num(j, "tau_ode");
    s.xi_ode = get_num(j, "xi_ode");
    s.W0 = get_num(j, "W0");
    s.dW0 = get_num(j, "dW0");
    s.d3W0 = get_num(j, "d3W0");
    s.z_shift_max = get_num(j, "z_shift_max");
    if (const auto it = j.find("profile_distance"); it != j.end() && it->is_array()) {
        std::array<double, 3> d{};
        for (int k = 0; k < 3; ++k) d[k] = (*it)[k].is_null() ? std::nan("") : (*it)[k].get<double>();
        s.profile_distance = d;
    }
    if (const auto it = j.find("bootstrap"); it != j.end() && it->is_object()) {
        BootstrapSummary b;
        b.all_pass = it->at("all_pass").get<bool>();
        for (const auto& [k, v] : it->at("margins").items()) b.margins[k] = v.is_null() ? std::nan("") : v.get<double>();
        s.bootstrap = b;
    }
    return s;
}

auto snapshot_to_json(const Snapshot& s) -> json
{
    return {
        {"schema_version", kSchemaVersion},
        {"type", "snapshot"},
        {"t", s.t_tilde},
        {"s", s.s},
        {"kappa", s.kappa},
        {"tau", s.tau},
        {"xi", s.xi},
        {"beta_tau", s.beta_tau},
        {"frame_speed", s.frame_speed},
        {"theta_tilde", s.theta_tilde},
        {"w", s.w},
        {"z", s.z},
        {"y", s.y},
        {"W", s.W},
        {"Z", s.Z},
        {"dW", s.dW},
        {"G_W", s.G_W},
        {"G_Z", s.G_Z},
    };
}

auto snapshot_from_json(const json& j) -> Snapshot
{
    Snapshot s;
    s.t_tilde = j.at("t").get<double>();
    s.s = j.at("s").get<double>();
    s.kappa = j.at("kappa").get<double>();
    s.tau = j.at("tau").get<double>();
    s.xi = j.at("xi").get<double>();
    s.beta_tau = j.at("beta_tau").get<double>();
    s.frame_speed = j.at("frame_speed").get<double>();
    s.theta_tilde = j.at("theta_tilde").get<std::vector<double>>();
    s.w = j.at("w").get<std::vector<double>>();
    s.z = j.at("z").get<std::vector<double>>();
    s.y = j.at("y").get<std::vector<double>>();
    s.W = j.at("W").get<std::vector<double>>();
    s.Z = j.at("Z").get<std::vector<double>>();
    s.dW = j.at("dW").get<std::vector<double>>();
    s.G_W = j.at("G_W").get<std::vector<double>>();
    s.G_Z = j.at("G_Z").get<std::vector<double>>();
    return s;
}

auto summarize(const RunRecord& rec, const ExperimentConfig& cfg) -> json
{
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config_hash"] = config_hash(cfg);
    j["status"] = to_string(rec.status);
    j["message"] = rec.message;
    j["samples"] = rec.samples.size();
    j["steps"] = rec.samples.empty() ? 0 : rec.samples.back().step;
    j["t_end"] = rec.samples.empty() ? json(nullptr) : num(rec.samples.back().t_tilde);

    const auto rep = diagnostics::blowup_report(rec);
    j["T_star"] = num(rep.T_star);
    j["T_minus_tau0"] = num(rep.T_star - rec.solver.tau0);
    j["tau_end"] = num(rep.tau_end);
    j["rate_exponent"] = num(rep.rate_exponent);
    j["rate_decades"] = num(rep.rate_decades);
    j["xi_star"] = num(rep.xi_star);
    j["holder_max"] = num(rep.holder_max);
    j["min_sigma"] = num(rep.min_sigma);
    j["max_drift"] = num(rep.max_drift);
    j["max_exterior_gradient"] = num(rep.max_exterior_gradient);

    double norm_w0 = 0.0;
    double norm_dw0 = 0.0;
    double max_slope = 0.0;
    std::map<std::string, double> margins;
    bool boot_all = true;
    bool have_boot = false;
    for (const auto& s : rec.samples) {
        max_slope = std::max(max_slope, s.max_slope);
        if (std::isfinite(s.W0)) norm_w0 = std::max(norm_w0, std::abs(s.W0));
        if (std::isfinite(s.dW0) && s.max_slope > 0.0) norm_dw0 = std::max(norm_dw0, std::abs(s.dW0 + 1.0));
        if (!s.bootstrap) continue;
        have_boot = true;
        boot_all = boot_all && s.bootstrap->all_pass;
        for (const auto& [k, v] : s.bootstrap->margins) {
            const auto it = margins.find(k);
            margins[k] = it == margins.end() ? v : std::min(it->second, v);
        }
    }
    json mj = json::object();
    for (const auto& [k, v] : margins) mj[k] = num(v);
    j["bootstrap_min_margins"] = mj;
    j["normalization"] = {{"max_abs_W0", norm_w0}, {"max_abs_dW0_plus_1", norm_dw0}};

    const auto cv = modulation::cross_validate(rec, rec.monitor.M);
    j["trackers"] = {
        {"max_kappa_gap", num(cv.max_kappa_gap)},
        {"max_tau_gap", num(cv.max_tau_gap)},
        {"max_xi_gap", num(cv.max_xi_gap)},
        {"max_tau_shift", num(cv.max_tau_shift)},
    };

    json pass = json::object();
    const bool blew = rec.status == RunStatus::BlewUp;
    const bool growing = rec.initial_min_slope < 0.0;
    if (blew) {
        pass["time"] = rep.pass.at("time");
        pass["rate"] = rep.pass.at("rate");
    }
    pass["vacuum"] = rep.pass.at("vacuum");
    pass["holder"] = rep.pass.at("holder");
    if (growing) {
        pass["drift"] = rep.pass.at("drift");
        pass["exterior_gradient"] = rep.pass.at("exterior_gradient");
    }
    if (have_boot && growing) pass["bootstrap"] = boot_all;
    const bool expected = blew || rec.status == RunStatus::MaxTime;
    pass["status"] = expected;
    j["pass"] = pass;
    bool all = true;
    for (const auto& [k, v] : pass.items()) all = all && v.get<bool>();
    j["all_pass"] = all;
    return j;
}

// ============================================================================
// Running
// ============================================================================

auto run_experiment(const ExperimentConfig& cfg, const fs::path& dir) -> RunOutput
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) raise(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();

    std::ofstream selfsim_csv;
    if (cfg.emit_selfsim > 0) {
        selfsim_csv.open(dir / "selfsim.csv", std::ios::binary);
        if (!selfsim_csv) raise(ErrorKind::IoError, "cannot open selfsim.csv");
        selfsim_csv << "record,s,y,W,Z,Wbar,W_minus_Wbar\n";
    }
    std::ofstream fields_csv;
    if (cfg.emit_fields > 0) {
        fields_csv.open(dir / "fields.csv", std::ios::binary);
        if (!fields_csv) raise(ErrorKind::IoError, "cannot open fields.csv");
        fields_csv << "record,t,theta_tilde,w,z,sigma,v\n";
    }
    int record_index = 0;
    equivariant::Observer observer;
    if (cfg.emit_selfsim > 0 || cfg.emit_fields > 0) {
        observer = [&](const EquivariantState& st, const RunSample& smp) {
            const int r = record_index++;
            if (cfg.emit_fields > 0 && r % cfg.emit_fields == 0) {
                for (std::size_t i = 0; i < st.grid.size(); ++i)
                    fields_csv << r << ',' << fmt(st.t_tilde) << ',' << fmt(st.grid[i]) << ',' << fmt(st.w[i]) << ','
                               << fmt(st.z[i]) << ',' << fmt(0.5 * (st.w[i] - st.z[i])) << ','
                               << fmt(0.5 * (st.w[i] + st.z[i])) << '\n';
            }
            if (cfg.emit_selfsim == 0 || r % cfg.emit_selfsim != 0 || !std::isfinite(smp.s)) return;
            ModulationState m{smp.t_tilde, smp.kappa, smp.tau, smp.xi, 0.0};
            if (cfg.modulation.tracker == Tracker::Extremal) m.xi_local = smp.slope_location;
            const auto f = selfsim::to_selfsimilar(st, m);
            for (std::size_t i = 0; i < f.y.size(); ++i) {
                const double wbar = profile::w1d(f.y[i]);
                selfsim_csv << r << ',' << fmt(f.s) << ',' << fmt(f.y[i]) << ',' << fmt(f.W[i]) << ',' << fmt(f.Z[i])
                            << ',' << fmt(wbar) << ',' << fmt(f.W[i] - wbar) << '\n';
            }
        };
    }

    RunOutput out;
    out.dir = dir;
    out.record = equivariant::run_until_blowup(cfg.solver, cfg.modulation, cfg.monitor, observer);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string hash = config_hash(cfg);
    {
        std::ostringstream os;
        json header = {{"schema_version", kSchemaVersion}, {"type", "header"}, {"config_hash", hash}, {"config", to_json(cfg)}};
        os << header.dump() << '\n';
        for (const auto& s : out.record.samples) os << sample_to_json(s).dump() << '\n';
        json footer = {
            {"schema_version", kSchemaVersion},
            {"type", "footer"},
            {"status", to_string(out.record.status)},
            {"message", out.record.message},
            {"T_star", num(out.record.T_star)},
            {"tau_end", num(out.record.tau_end)},
            {"initial_min_slope", num(out.record.initial_min_slope)},
        };
        os << footer.dump() << '\n';
        write_text(dir / "run.jsonl", os.str());
    }
    if (!out.record.snapshots.empty()) {
        std::ostringstream os;
        for (const auto& s : out.record.snapshots) os << snapshot_to_json(s).dump() << '\n';
        write_text(dir / "snapshots.jsonl", os.str());
    }
    write_text(dir / "config.json", to_json(cfg).dump(2) + "\n");
    out.summary = summarize(out.record, cfg);
    write_text(dir / "summary.json", out.summary.dump(2) + "\n");
    const json meta = {{"started_utc", started}, {"finished_utc", utc_now()}, {"wall_seconds", seconds}, {"config_hash", hash}};
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
    return out;
}

auto read_record(const fs::path& path) -> std::pair<RunRecord, ExperimentConfig>
{
    const fs::path file = fs::is_directory(path) ? path / "run.jsonl" : path;
    std::ifstream in(file);
    if (!in) raise(ErrorKind::IoError, "cannot read " + file.string());
    RunRecord rec;
    ExperimentConfig cfg;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            raise(ErrorKind::IoError, file.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.value("schema_version", 0) != kSchemaVersion)
            raise(ErrorKind::IoError, file.string() + ":" + std::to_string(lineno) + ": unsupported schema_version");
        const std::string type = j.value("type", "");
        if (type == "header") {
            cfg = from_json(j.at("config"));
            have_header = true;
        } else if (type == "sample") {
            rec.samples.push_back(sample_from_json(j));
        } else if (type == "footer") {
            rec.status = status_from(j.at("status").get<std::string>());
            rec.message = j.value("message", "");
            rec.T_star = get_num(j, "T_star");
            rec.tau_end = get_num(j, "tau_end");
            rec.initial_min_slope = get_num(j, "initial_min_slope");
        }
    }
    if (!have_header) raise(ErrorKind::IoError, file.string() + ": missing header line");
    rec.solver = cfg.solver;
    rec.monitor = cfg.monitor;
    const fs::path snaps = file.parent_path() / "snapshots.jsonl";
    if (fs::exists(snaps)) {
        std::ifstream sin(snaps);
        while (std::getline(sin, line))
            if (!line.empty()) rec.snapshots.push_back(snapshot_from_json(json::parse(line)));
    }
    return {rec, cfg};
}

// ============================================================================
// Sweeps
// ============================================================================

auto expand_sweep(const ExperimentConfig& cfg) -> std::vector<ExperimentConfig>
{
    const auto& w = cfg.sweep;
    auto axis = [](const std::vector<double>& v, double d) { return v.empty() ? std::vector<double>{d} : v; };
    const auto gammas = axis(w.gamma, cfg.solver.gamma);
    const auto taus = axis(w.tau0, cfg.solver.tau0);
    const auto xis = axis(w.xi0, cfg.solver.xi0);
    const auto cells = w.n_cells.empty() ? std::vector<int>{cfg.solver.n_cells} : w.n_cells;
    std::vector<ExperimentConfig> out;
    for (double g : gammas)
        for (double t : taus)
            for (double x : xis)
                for (int n : cells) {
                    ExperimentConfig c = cfg;
                    c.sweep = SweepAxes{};
                    c.solver.gamma = g;
                    c.solver.tau0 = t;
                    c.solver.xi0 = x;
                    c.solver.n_cells = n;
                    out.push_back(c);
                }
    return out;
}

auto sweep(const ExperimentConfig& cfg, const fs::path& dir) -> std::vector<SweepRow>
{
    const auto runs = expand_sweep(cfg);
    std::vector<SweepRow> rows(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            const auto& c = runs[i];
            SweepRow& r = rows[i];
            r.hash = config_hash(c);
            r.gamma = c.solver.gamma;
            r.tau0 = c.solver.tau0;
            r.xi0 = c.solver.xi0;
            r.n_cells = c.solver.n_cells;
            try {
                const auto out = run_experiment(c, dir / r.hash);
                const auto& s = out.summary;
                r.status = s["status"].get<std::string>();
                r.T_star = get_num(s, "T_star");
                r.T_minus_tau0 = get_num(s, "T_minus_tau0");
                r.rate_exponent = get_num(s, "rate_exponent");
                r.max_drift = get_num(s, "max_drift");
                r.holder_max = get_num(s, "holder_max");
                r.min_sigma = get_num(s, "min_sigma");
                double mm = std::numeric_limits<double>::infinity();
                for (const auto& [k, v] : s["bootstrap_min_margins"].items()) {
                    if ((k[0] == 'W' && k[1] != 't') || k[0] == 'Z')
                        mm = std::min(mm, v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>());
                }
                r.bootstrap_min_margin = std::isfinite(mm) ? mm : std::nan("");
                r.all_pass = s["all_pass"].get<bool>();
            } catch (const std::exception& e) {
                r.status = "error";
                r.error = e.what();
                r.T_star = r.T_minus_tau0 = r.rate_exponent = r.max_drift = r.holder_max = r.min_sigma =
                    r.bootstrap_min_margin = std::nan("");
            }
        }
    };
    unsigned n = cfg.sweep.threads > 0 ? static_cast<unsigned>(cfg.sweep.threads) : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(runs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.hash < b.hash; });
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_sweep_csv(rows, dir / "sweep.csv");
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const fs::path& path)
{
    std::ostringstream os;
    os << "config_hash,gamma,tau0,xi0,n_cells,status,T_star,T_minus_tau0,rate_exponent,max_drift,holder_max,"
          "min_sigma,bootstrap_min_margin,all_pass,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), '"', '\'');
        os << r.hash << ',' << fmt(r.gamma) << ',' << fmt(r.tau0) << ',' << fmt(r.xi0) << ',' << r.n_cells << ','
           << r.status << ',' << fmt(r.T_star) << ',' << fmt(r.T_minus_tau0) << ',' << fmt(r.rate_exponent) << ','
           << fmt(r.max_drift) << ',' << fmt(r.holder_max) << ',' << fmt(r.min_sigma) << ','
           << fmt(r.bootstrap_min_margin) << ',' << (r.all_pass ? 1 : 0) << ",\"" << err << "\"\n";
    }
    write_text(path, os.str());
}

auto time_scaling_slope(const std::vector<SweepRow>& rows) -> double
{
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& r : rows) {
        if (r.status != "blew_up" || !std::isfinite(r.T_minus_tau0) || r.T_minus_tau0 == 0.0) continue;
        x.push_back(std::log(r.tau0));
        y.push_back(std::log(std::abs(r.T_minus_tau0)));
    }
    if (x.size() < 2) raise(ErrorKind::DiagnosticUndefined, "time scaling needs at least two blown-up rows");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) raise(ErrorKind::DiagnosticUndefined, "time scaling needs distinct tau0 values");
    return sxy / sxx;
}

}  // namespace s2shock::harness
