// Acceptance gate: one check per line, PASS/FAIL with the achieved number
// and the tolerance in force.  Exit status 0 iff everything passes.

#include <horoct/fields.hpp>
#include <horoct/slice.hpp>
#include <horoct/support.hpp>
#include <horoct/transform.hpp>
#include <horoct/volterra.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace horoct;
namespace vt = horoct::volterra;

namespace {

int g_failures = 0;

void report(const std::string& name, double achieved, double tolerance, bool pass,
            double seconds) {
    std::printf("%s %-34s achieved=%-12.3e tolerance=%-8.0e (%.1fs)\n", pass ? "PASS" : "FAIL",
                name.c_str(), achieved, tolerance, seconds);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void check(const std::string& name, double tolerance, const std::function<double()>& run) {
    Timer timer;
    double achieved = 0.0;
    bool ok = true;
    try {
        achieved = run();
    } catch (const std::exception& e) {
        std::printf("FAIL %-34s exception: %s\n", name.c_str(), e.what());
        ++g_failures;
        return;
    }
    ok = achieved <= tolerance;
    report(name, achieved, tolerance, ok, timer.seconds());
}

// 1. Sphere route vs conjugated plane route, random exterior horocycles.
double forward_cross_check() {
    const QuadratureSpec q;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rad(0.1, 0.5), horiz(-1.0, 1.0);
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
        auto f = fields::gaussian_bump(n);
        for (int i = 0; i < 10; ++i) {
            const double r = rad(rng);
            Vec contact(static_cast<size_t>(n - 1));
            for (auto& c : contact) c = horiz(rng);
            const double a = transform_sphere(f, contact, r, q).value;
            const double b = transform_via_isometry(f, contact, r, q).value;
            worst = std::max(worst, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12}));
        }
    }
    return worst;
}

// 2. Contact-space Fourier data vs the u-integral of the slices.
double fubini_identity() {
    QuadratureSpec q;
    q.plane_nodes = 64;
    q.sphere_nodes = 32;
    auto f = fields::gaussian_bump(3);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> rad(0.15, 0.5), freq(-3.0, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double r = rad(rng);
        const Vec eta{freq(rng), freq(rng)};
        const Complex direct = exterior_data(f, eta, {r}, q)[0];
        const Complex via = exterior_data_via_slices(f, eta, r, q);
        worst = std::max(worst, std::abs(direct - via) / (std::abs(direct) + 1e-12));
    }
    return worst;
}

// 3. Analytic solver cases.
double solver_second_kind_exp() {
    auto grid = vt::uniform_grid(0.0, 2.0, 512);
    std::vector<double> f(grid.size(), 1.0);
    auto phi = vt::solve_second_kind<double>(grid, [](double, double) { return 1.0; }, f);
    double err = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(phi[i] - std::exp(-grid[i])));
    return err;
}

double solver_second_kind_sin(int nodes) {
    auto grid = vt::uniform_grid(0.0, 2.0, nodes);
    std::vector<double> f(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) f[i] = grid[i];
    auto phi = vt::solve_second_kind<double>(grid, [](double s, double t) { return s - t; }, f);
    double err = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(phi[i] - std::sin(grid[i])));
    return err;
}

double solver_abel_constant() {
    auto grid = vt::uniform_grid(0.0, 1.0, 512);
    std::function<double(double)> f = [](double s) { return 2.0 * std::sqrt(s); };
    auto phi = vt::solve_abel_plain<double>(grid, 0.5, f);
    double err = 0.0;
    for (double v : phi) err = std::max(err, std::abs(v - 1.0));
    return err;
}

// 4. Support theorem, homogeneous direction.
double zero_data_reconstruction() {
    double worst = 0.0;
    for (int n : {2, 3, 4, 5}) {
        ExteriorDataset d;
        d.n = n;
        d.eta_list = default_frequencies(n, 4.0);
        const int nodes = (n <= 3) ? 256 : 192;
        d.r_grid.resize(static_cast<size_t>(nodes));
        for (int i = 0; i < nodes; ++i) d.r_grid[static_cast<size_t>(i)] = 0.5 * (i + 1) / nodes;
        d.g.assign(d.eta_list.size(), std::vector<Complex>(d.r_grid.size(), Complex{}));
        for (size_t ei = 0; ei < d.eta_list.size(); ++ei) {
            const SliceData s = reconstruct(d, ei);
            for (const Complex& v : s.values) worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

double supported_above_data(double* slice_max) {
    QuadratureSpec q;
    double worst_data = 0.0, worst_slice = 0.0;
    for (int n : {2, 3, 4, 5}) {
        QuadratureSpec qq = q;
        if (n == 5) qq.plane_nodes = 16;  // field is zero on the slab; cheap nodes suffice
        if (n == 4) qq.plane_nodes = 32;
        VerifySupportOptions opt;
        opt.synthesis.u_nodes = 128;
        opt.synthesis.threads = 4;
        auto rep = verify_support(fields::vertical_bump(n, 1.2, 2.0), 0.2, qq, opt);
        worst_data = std::max(worst_data, rep.max_data_magnitude);
        worst_slice = std::max(worst_slice, rep.max_slice_magnitude);
    }
    *slice_max = worst_slice;
    return worst_data;
}

// 5. Volumetric round trip: synthesize, reconstruct, compare to the direct
// slice quadrature, per frequency in relative sup norm.
double round_trip(int n, int nodes, const QuadratureSpec& q, const SynthesisOptions& opt) {
    auto f = fields::vertical_bump(n, 0.25, 0.85);
    std::vector<double> r_grid(static_cast<size_t>(nodes));
    for (int i = 0; i < nodes; ++i) r_grid[static_cast<size_t>(i)] = 0.5 * (i + 1) / nodes;
    auto data = synthesize_exterior(f, default_frequencies(n, 4.0), r_grid, q, opt);
    double worst = 0.0;
    for (size_t ei = 0; ei < data.eta_list.size(); ++ei) {
        const SliceData slice = reconstruct(data, ei);
        double err = 0.0, ref = 0.0;
        for (size_t i = 0; i < slice.u_grid.size(); ++i) {
            const Complex direct = fourier_slice(f, slice.eta, slice.u_grid[i], q).value;
            err = std::max(err, std::abs(slice.values[i] - direct));
            ref = std::max(ref, std::abs(direct));
        }
        worst = std::max(worst, err / std::max(ref, 1e-12));
    }
    return worst;
}

// 6. The even-reduction constant: d/ds of the higher-dimensional integral
// equals half the reduced-kernel integral.
double even_step_constant() {
    auto H = [](double x) { return sphere_phase_integral(x, 4); };
    auto Hpx = [](double x) { return sphere_phase_derivative_over_z(x, 4); };
    auto profile = [](double u) { return fields::bump(u, 0.1, 0.9); };
    std::function<Complex(double)> F = [profile](double u) { return Complex{profile(u), 0.0}; };
    std::function<Complex(double)> uF = [profile](double u) { return Complex{u * profile(u), 0.0}; };
    auto H1 = [H, Hpx](double x) { return Hpx(x) * x * x + H(x); };
    double worst = 0.0;
    for (double s : {0.4, 0.55, 0.7, 0.85, 1.0}) {
        const double h = 1e-4;
        const Complex dg =
            (kernel_integral(4, H, F, s + h) - kernel_integral(4, H, F, s - h)) / (2.0 * h);
        const Complex reduced = 0.5 * kernel_integral(2, H1, uF, s);
        worst = std::max(worst, std::abs(dg - reduced) / std::abs(reduced));
    }
    return worst;
}

// 7. Phase integral: special-function route vs direct sphere quadrature.
double phase_integral_validation() {
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n)
        for (double z = 0.0; z <= 20.0 + 1e-9; z += 0.25)
            worst = std::max(worst, std::abs(sphere_phase_integral(z, n) -
                                             sphere_phase_integral_quadrature(z, n, 80)));
    return worst;
}

// 8. CLI determinism: identical config and seed give byte-identical CSVs.
double cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "horoct-acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path cfg = base / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "command = transform\nn = 3\ntrials = 6\nfunction = gaussian-bump\nseed = 31\n";
    }
    auto run = [&](const std::string& sub) {
        const fs::path dir = base / sub;
        const std::string cmd = std::string("\"") + HOROCT_CLI_PATH + "\" --config " + cfg.string() +
                                " --output-dir " + dir.string() + " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) throw std::runtime_error("CLI run failed");
        std::ifstream in(dir / "transform.csv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = run("a"), b = run("b");
    if (a.empty()) throw std::runtime_error("CLI produced no CSV output");
    return (a == b) ? 0.0 : 1.0;
}

}  // namespace

int main() {
    check("forward-cross-check", 1e-5, forward_cross_check);
    check("fubini-slice-identity", 1e-3, fubini_identity);
    check("solver-exp", 1e-4, solver_second_kind_exp);
    check("solver-sin", 1e-4, [] { return solver_second_kind_sin(512); });
    check("solver-order", 1.0 / 3.5, [] {
        // inverted ratio: fine/coarse error must be <= 1/3.5
        return solver_second_kind_sin(512) / solver_second_kind_sin(256);
    });
    check("solver-abel", 1e-3, solver_abel_constant);
    check("support-zero-data", 1e-10, zero_data_reconstruction);
    {
        Timer timer;
        double slice_max = 0.0;
        try {
            const double data_max = supported_above_data(&slice_max);
            report("support-exterior-data", data_max, 1e-8, data_max <= 1e-8, timer.seconds());
            report("support-reconstruction", slice_max, 1e-6, slice_max <= 1e-6, 0.0);
        } catch (const std::exception& e) {
            std::printf("FAIL support-exterior-data exception: %s\n", e.what());
            ++g_failures;
        }
    }
    {
        QuadratureSpec q;
        SynthesisOptions opt;
        opt.threads = 4;
        check("round-trip-n2", 5e-2, [&] { return round_trip(2, 256, q, opt); });
        check("round-trip-n3", 5e-2, [&] { return round_trip(3, 256, q, opt); });
        QuadratureSpec q4;
        q4.plane_nodes = 64;
        q4.theta_nodes = 128;
        SynthesisOptions opt4;
        opt4.threads = 4;
        opt4.u_nodes = 512;
        opt4.theta_nodes = 128;
        check("round-trip-n4", 1e-1, [&] { return round_trip(4, 192, q4, opt4); });
    }
    check("even-step-constant", 1e-4, even_step_constant);
    check("phase-integral-bessel", 1e-10, phase_integral_validation);
    check("cli-determinism", 0.0, cli_determinism);

    if (g_failures) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all checks passed\n");
    return 0;
}
