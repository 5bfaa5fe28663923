// Config-driven experiment runner around the horoct library.
//
// Usage:  horoct --config run.cfg --output-dir out [--threads k] [--verbose]
//
// The config is a plain key=value file ('#' starts a comment).  Recognized
// commands: transform, synthesize, reconstruct, verify-support,
// solve-selftest.  Each run writes one CSV (columns documented below, floats
// at 17 significant digits) plus report.json with the config echo, the
// tolerances in force and the achieved errors.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure (tolerance
// exceeded or pipeline error), 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <horoct/fields.hpp>
#include <horoct/slice.hpp>
#include <horoct/support.hpp>
#include <horoct/transform.hpp>
#include <horoct/volterra.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "command",    "n",          "function",    "a",         "lo",
        "hi",         "width",      "table_heights", "table_values",
        "seed",       "trials",     "tolerance",   "delta",     "eta_max",
        "r_nodes",    "r_max",      "u_nodes",     "theta_nodes",
        "plane_nodes", "plane_cutoff", "sphere_nodes"};
    return keys;
}

std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key or value");
        if (!known_keys().count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (cfg.count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg[key] = val;
    }
    return cfg;
}

class Config {
public:
    explicit Config(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    const std::map<std::string, std::string>& raw() const { return kv_; }

    std::string str(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }
    std::string require(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("config: missing required key '" + key + "'");
        return it->second;
    }
    double num(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        try {
            size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' is not a number: '" + it->second + "'");
        }
    }
    int integer(const std::string& key, int dflt) const {
        double v = num(key, dflt);
        if (v != std::floor(v)) throw ConfigError("config: key '" + key + "' must be an integer");
        return static_cast<int>(v);
    }
    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(require(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("config: bad number '" + item + "' in list '" + key + "'");
            }
        }
        if (out.empty()) throw ConfigError("config: empty list '" + key + "'");
        return out;
    }

private:
    std::map<std::string, std::string> kv_;
};

horoct::DecayFunction build_field(const Config& cfg, int n) {
    std::string name = cfg.str("function", "gaussian-bump");
    if (name == "custom-table")
        return horoct::fields::table_field(n, cfg.list("table_heights"), cfg.list("table_values"));
    std::map<std::string, double> params;
    for (const char* key : {"a", "lo", "hi", "width"})
        if (cfg.raw().count(key)) params[key] = cfg.num(key, 0.0);
    try {
        return horoct::fields::make_field(name, n, params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

horoct::QuadratureSpec build_quadrature(const Config& cfg) {
    horoct::QuadratureSpec q;
    q.theta_nodes = cfg.integer("theta_nodes", q.theta_nodes);
    q.sphere_nodes = cfg.integer("sphere_nodes", q.sphere_nodes);
    q.plane_nodes = cfg.integer("plane_nodes", q.plane_nodes);
    q.plane_cutoff = cfg.num("plane_cutoff", q.plane_cutoff);
    try {
        q.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return q;
}

struct Check {
    std::string name;
    double tolerance = 0.0;
    double max_error = 0.0;
    bool pass = false;
};

struct RunResult {
    std::vector<Check> checks;
    std::vector<std::string> artifacts;
    nlohmann::ordered_json extra;
};

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : path_(path.string()), out_(path) {
        if (!out_) throw IoError("cannot open output file: " + path_);
        for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }
    void close() {
        out_.close();
        if (!out_) throw IoError("write failure on " + path_);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
};

// --- transform ---------------------------------------------------------
// CSV columns: trial, r, contact_norm, direct, via_plane, rel_diff,
// quad_error, tail_bound.  Check: max rel_diff <= tolerance.
RunResult run_transform(const Config& cfg, const std::filesystem::path& outdir, int /*threads*/,
                        bool verbose) {
    const int n = cfg.integer("n", 3);
    const int trials = cfg.integer("trials", 10);
    const double tol = cfg.num("tolerance", 1e-5);
    const auto seed = static_cast<uint64_t>(cfg.num("seed", 1));
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    auto f = build_field(cfg, n);
    auto q = build_quadrature(cfg);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad(0.1, 0.5), horiz(-1.0, 1.0);

    CsvWriter csv(outdir / "transform.csv",
                  {"trial", "r", "contact_norm", "direct", "via_plane", "rel_diff", "quad_error",
                   "tail_bound"});
    double max_rel = 0.0;
    for (int t = 0; t < trials; ++t) {
        const double r = rad(rng);
        horoct::Vec contact(static_cast<size_t>(n - 1));
        double cn2 = 0.0;
        for (double& c : contact) {
            c = horiz(rng);
            cn2 += c * c;
        }
        auto direct = horoct::transform_sphere(f, contact, r, q);
        auto via = horoct::transform_via_isometry(f, contact, r, q);
        const double scale = std::max({std::abs(direct.value), std::abs(via.value), 1e-300});
        const double rel = std::abs(direct.value - via.value) / scale;
        max_rel = std::max(max_rel, rel);
        if (verbose)
            std::cerr << "transform trial " << t << ": r=" << r << " rel_diff=" << rel << "\n";
        csv.row({std::to_string(t), fmt17(r), fmt17(std::sqrt(cn2)), fmt17(direct.value),
                 fmt17(via.value), fmt17(rel), fmt17(std::max(direct.quad_error, via.quad_error)),
                 fmt17(std::max(direct.tail_bound, via.tail_bound))});
    }
    csv.close();

    RunResult res;
    res.artifacts.push_back(csv.path());
    res.checks.push_back({"transform-route-agreement", tol, max_rel, max_rel <= tol});
    return res;
}

std::vector<double> make_r_grid(const Config& cfg) {
    const int r_nodes = cfg.integer("r_nodes", 128);
    const double r_max = cfg.num("r_max", 0.5);
    if (r_nodes < 16) throw ConfigError("config: r_nodes must be >= 16");
    if (!(r_max > 0.0) || r_max > 0.5) throw ConfigError("config: r_max must be in (0, 0.5]");
    std::vector<double> r(static_cast<size_t>(r_nodes));
    for (int i = 0; i < r_nodes; ++i) r[static_cast<size_t>(i)] = r_max * (i + 1) / r_nodes;
    return r;
}

horoct::SynthesisOptions make_synthesis_options(const Config& cfg, int threads) {
    horoct::SynthesisOptions opt;
    opt.u_nodes = cfg.integer("u_nodes", opt.u_nodes);
    opt.theta_nodes = cfg.integer("theta_nodes", opt.theta_nodes);
    opt.threads = threads;
    return opt;
}

// --- synthesize --------------------------------------------------------
// CSV columns: eta_index, eta_norm, r, re, im.  Also writes dataset.txt in
// the library's dataset format.  Check: quadrature sanity only (always
// passes; reported max magnitude is informational).
RunResult run_synthesize(const Config& cfg, const std::filesystem::path& outdir, int threads,
                         bool verbose) {
    const int n = cfg.integer("n", 3);
    auto f = build_field(cfg, n);
    auto q = build_quadrature(cfg);
    auto r_grid = make_r_grid(cfg);
    auto etas = horoct::default_frequencies(n, cfg.num("eta_max", 8.0));

    if (verbose) std::cerr << "synthesizing " << etas.size() << " frequencies\n";
    auto data = horoct::synthesize_exterior(f, etas, r_grid, q, make_synthesis_options(cfg, threads));

    CsvWriter csv(outdir / "synthesize.csv", {"eta_index", "eta_norm", "r", "re", "im"});
    for (size_t k = 0; k < data.eta_list.size(); ++k) {
        double en2 = 0.0;
        for (double c : data.eta_list[k]) en2 += c * c;
        for (size_t i = 0; i < data.r_grid.size(); ++i)
            csv.row({std::to_string(k), fmt17(std::sqrt(en2)), fmt17(data.r_grid[i]),
                     fmt17(data.g[k][i].real()), fmt17(data.g[k][i].imag())});
    }
    csv.close();
    const auto dataset_path = (outdir / "dataset.txt").string();
    horoct::write_dataset_file(dataset_path, data);

    RunResult res;
    res.artifacts = {csv.path(), dataset_path};
    res.extra["max_data_magnitude"] = data.max_magnitude();
    res.checks.push_back({"synthesize-completed", 0.0, 0.0, true});
    return res;
}

// --- reconstruct -------------------------------------------------------
// Synthesizes exterior data from the configured field, reconstructs the
// Fourier slices, and compares them against the direct slice quadrature.
// CSV columns: eta_index, eta_norm, u, re, im, ref_re, ref_im, abs_error.
// Check: per-frequency relative sup error <= tolerance.
RunResult run_reconstruct(const Config& cfg, const std::filesystem::path& outdir, int threads,
                          bool verbose) {
    const int n = cfg.integer("n", 3);
    const double tol = cfg.num("tolerance", 5e-2);
    auto f = build_field(cfg, n);
    auto q = build_quadrature(cfg);
    auto r_grid = make_r_grid(cfg);
    auto etas = horoct::default_frequencies(n, cfg.num("eta_max", 4.0));

    auto data = horoct::synthesize_exterior(f, etas, r_grid, q, make_synthesis_options(cfg, threads));

    CsvWriter csv(outdir / "reconstruct.csv",
                  {"eta_index", "eta_norm", "u", "re", "im", "ref_re", "ref_im", "abs_error"});
    double max_rel = 0.0;
    for (size_t k = 0; k < data.eta_list.size(); ++k) {
        if (verbose) std::cerr << "reconstructing frequency " << k << "\n";
        auto slice = horoct::reconstruct(data, k);
        double en2 = 0.0;
        for (double c : slice.eta) en2 += c * c;
        double sup_err = 0.0, sup_ref = 0.0;
        for (size_t i = 0; i < slice.u_grid.size(); ++i) {
            const double u = slice.u_grid[i];
            auto ref = horoct::fourier_slice(f, slice.eta, u, q);
            const double err = std::abs(slice.values[i] - ref.value);
            sup_err = std::max(sup_err, err);
            sup_ref = std::max(sup_ref, std::abs(ref.value));
            csv.row({std::to_string(k), fmt17(std::sqrt(en2)), fmt17(u),
                     fmt17(slice.values[i].real()), fmt17(slice.values[i].imag()),
                     fmt17(ref.value.real()), fmt17(ref.value.imag()), fmt17(err)});
        }
        const double rel = sup_err / std::max(sup_ref, 1e-12);
        max_rel = std::max(max_rel, rel);
    }
    csv.close();

    RunResult res;
    res.artifacts.push_back(csv.path());
    res.checks.push_back({"reconstruction-relative-sup-error", tol, max_rel, max_rel <= tol});
    return res;
}

// --- verify-support ----------------------------------------------------
// CSV columns: eta_index, max_slice_magnitude.  Checks: forward data and
// reconstructed slices both consistent with zero at the configured
// tolerances.
RunResult run_verify_support(const Config& cfg, const std::filesystem::path& outdir, int threads,
                             bool verbose) {
    const int n = cfg.integer("n", 3);
    const double delta = cfg.num("delta", 0.2);
    auto f = build_field(cfg, n);
    auto q = build_quadrature(cfg);

    horoct::VerifySupportOptions opt;
    opt.data_tolerance = cfg.num("tolerance", opt.data_tolerance);
    opt.eta_max = cfg.num("eta_max", opt.eta_max);
    opt.synthesis = make_synthesis_options(cfg, threads);
    if (verbose) std::cerr << "verify-support: n=" << n << " delta=" << delta << "\n";

    auto report = horoct::verify_support(f, delta, q, opt);

    CsvWriter csv(outdir / "verify_support.csv", {"eta_index", "max_slice_magnitude"});
    for (size_t k = 0; k < report.per_frequency_max.size(); ++k)
        csv.row({std::to_string(k), fmt17(report.per_frequency_max[k])});
    csv.close();

    RunResult res;
    res.artifacts.push_back(csv.path());
    res.checks.push_back({"exterior-data-vanishes", report.data_tolerance,
                          report.max_data_magnitude,
                          report.max_data_magnitude <= report.data_tolerance});
    res.checks.push_back({"reconstructed-slices-vanish", report.slice_tolerance,
                          report.max_slice_magnitude,
                          report.max_slice_magnitude <= report.slice_tolerance});
    res.extra["verdict"] =
        report.consistent_with_zero ? "consistent-with-zero" : "nonzero-exterior-data";
    return res;
}

// --- solve-selftest ----------------------------------------------------
// Analytic solver cases.  CSV columns: case, nodes, max_error, tolerance,
// pass.
RunResult run_selftest(const Config& cfg, const std::filesystem::path& outdir, int /*threads*/,
                       bool verbose) {
    namespace vt = horoct::volterra;
    const int nodes = cfg.integer("r_nodes", 512);
    if (nodes < 16) throw ConfigError("config: r_nodes must be >= 16");

    struct Case {
        std::string name;
        double tolerance;
        double max_error;
    };
    std::vector<Case> cases;

    {  // phi(s) + int_0^s phi = 1  =>  phi = e^{-s}
        auto grid = vt::uniform_grid(0.0, 2.0, nodes);
        std::vector<double> rhs(grid.size(), 1.0);
        auto phi = vt::solve_second_kind<double>(grid, [](double, double) { return 1.0; }, rhs);
        double err = 0.0;
        for (size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(phi[i] - std::exp(-grid[i])));
        cases.push_back({"second-kind-exp", 1e-4, err});
    }
    {  // phi(s) + int_0^s (s-t) phi(t) dt = s  =>  phi = sin s
        auto grid = vt::uniform_grid(0.0, 2.0, nodes);
        std::vector<double> rhs(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) rhs[i] = grid[i];
        auto phi = vt::solve_second_kind<double>(grid, [](double s, double t) { return s - t; }, rhs);
        double err = 0.0;
        for (size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(phi[i] - std::sin(grid[i])));
        cases.push_back({"second-kind-sin", 1e-4, err});
    }
    {  // int_0^s (s-t)^{-1/2} phi(t) dt = 2 sqrt(s)  =>  phi == 1
        auto grid = vt::uniform_grid(0.0, 1.0, nodes);
        std::function<double(double)> rhs = [](double s) { return 2.0 * std::sqrt(s); };
        auto phi = vt::solve_abel_plain<double>(grid, 0.5, rhs);
        double err = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(phi[i] - 1.0));
        cases.push_back({"abel-constant", 1e-3, err});
    }

    CsvWriter csv(outdir / "selftest.csv", {"case", "nodes", "max_error", "tolerance", "pass"});
    RunResult res;
    for (const auto& c : cases) {
        const bool pass = c.max_error <= c.tolerance;
        if (verbose) std::cerr << c.name << ": max_error=" << c.max_error << "\n";
        csv.row({c.name, std::to_string(nodes), fmt17(c.max_error), fmt17(c.tolerance),
                 pass ? "1" : "0"});
        res.checks.push_back({c.name, c.tolerance, c.max_error, pass});
    }
    csv.close();
    res.artifacts.push_back(csv.path());
    return res;
}

void write_report(const std::filesystem::path& outdir, const std::string& command,
                  const Config& cfg, int threads, const RunResult& res, const std::string& status) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["status"] = status;
    j["threads"] = threads;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.raw()) j["config"][k] = v;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : res.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"tolerance", c.tolerance},
                               {"max_error", c.max_error},
                               {"pass", c.pass}});
    }
    for (const auto& [k, v] : res.extra.items()) j[k] = v;
    j["artifacts"] = res.artifacts;

    std::ofstream out(outdir / "report.json");
    if (!out) throw IoError("cannot open report.json for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failure on report.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"horocycle transform experiment runner"};
    std::string config_path, output_dir = ".";
    int threads = 1;
    bool verbose = false;
    app.add_option("--config", config_path, "key=value config file")->required();
    app.add_option("--output-dir", output_dir, "directory for CSV/JSON artifacts");
    app.add_option("--threads", threads, "worker thread count (HOROCT_THREADS overrides)");
    app.add_flag("--verbose", verbose, "progress to stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (const char* env = std::getenv("HOROCT_THREADS")) {
        try {
            threads = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "error: HOROCT_THREADS is not an integer: " << env << "\n";
            return 1;
        }
    }
    if (threads < 1) {
        std::cerr << "error: thread count must be >= 1\n";
        return 1;
    }

    try {
        Config cfg(parse_config(config_path));
        const std::string command = cfg.require("command");
        const int n = cfg.integer("n", 3);
        if (n < 2 || n > 8) throw ConfigError("config: n must be in [2, 8]");

        std::filesystem::path outdir(output_dir);
        std::error_code ec;
        std::filesystem::create_directories(outdir, ec);
        if (ec) throw IoError("cannot create output directory: " + output_dir);

        RunResult res;
        if (command == "transform")
            res = run_transform(cfg, outdir, threads, verbose);
        else if (command == "synthesize")
            res = run_synthesize(cfg, outdir, threads, verbose);
        else if (command == "reconstruct")
            res = run_reconstruct(cfg, outdir, threads, verbose);
        else if (command == "verify-support")
            res = run_verify_support(cfg, outdir, threads, verbose);
        else if (command == "solve-selftest")
            res = run_selftest(cfg, outdir, threads, verbose);
        else
            throw ConfigError("config: unknown command '" + command + "'");

        bool all_pass = true;
        for (const auto& c : res.checks) all_pass = all_pass && c.pass;
        write_report(outdir, command, cfg, threads, res, all_pass ? "pass" : "fail");
        for (const auto& c : res.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " max_error=" << fmt17(c.max_error)
                      << " tolerance=" << fmt17(c.tolerance) << "\n";
        return all_pass ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: pipeline failure: " << e.what() << "\n";
        return 2;
    }
}
