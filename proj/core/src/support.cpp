#include "horoct/support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "horoct/quadrature.hpp"
#include "horoct/volterra.hpp"

namespace horoct {

namespace {

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double radical_inverse(unsigned long long i, unsigned base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i) {
        x += (i % base) * f;
        i /= base;
        f *= inv;
    }
    return x;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17};

// 4-point local Lagrange interpolation on a uniform grid, constant
// extension below the first node.
class SliceInterpolant {
public:
    SliceInterpolant(double u0, double du, std::vector<Complex> values)
        : u0_(u0), du_(du), v_(std::move(values)) {}

    Complex operator()(double u) const {
        const int n = static_cast<int>(v_.size());
        if (u <= u0_) return v_.front();
        const double pos = (u - u0_) / du_;
        int i0 = std::clamp(static_cast<int>(std::floor(pos)) - 1, 0, n - 4);
        Complex acc{0.0, 0.0};
        for (int j = i0; j < i0 + 4; ++j) {
            double w = 1.0;
            for (int l = i0; l < i0 + 4; ++l) {
                if (l == j) continue;
                w *= (pos - l) / static_cast<double>(j - l);
            }
            acc += w * v_[static_cast<size_t>(j)];
        }
        return acc;
    }

private:
    double u0_, du_;
    std::vector<Complex> v_;
};

void parallel_over(size_t count, int threads, const std::function<void(size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    const int k = std::min<int>(threads, static_cast<int>(count));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(k));
    for (int t = 0; t < k; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void ExteriorDataset::validate() const {
    if (n < 2 || n > 8) throw std::invalid_argument("ExteriorDataset: n out of range [2, 8]");
    if (eta_list.empty() || r_grid.empty()) throw std::invalid_argument("ExteriorDataset: empty grids");
    for (const auto& e : eta_list)
        if (static_cast<int>(e.size()) != n - 1)
            throw std::invalid_argument("ExteriorDataset: eta dimension mismatch");
    double prev = 0.0;
    for (double r : r_grid) {
        if (!(r > prev)) throw std::invalid_argument("ExteriorDataset: r_grid must be increasing and positive");
        prev = r;
    }
    if (2.0 * r_grid.back() > 1.0 + 1e-12)
        throw std::invalid_argument("ExteriorDataset: exterior family requires 2 max(r) <= 1");
    if (g.size() != eta_list.size())
        throw std::invalid_argument("ExteriorDataset: data/frequency shape mismatch");
    for (const auto& row : g)
        if (row.size() != r_grid.size())
            throw std::invalid_argument("ExteriorDataset: data/radius shape mismatch");
}

double ExteriorDataset::max_magnitude() const {
    double m = 0.0;
    for (const auto& row : g)
        for (const Complex& v : row) m = std::max(m, std::abs(v));
    return m;
}

std::vector<Vec> default_frequencies(int n, double eta_max) {
    std::vector<Vec> out;
    out.push_back(Vec(static_cast<size_t>(n - 1), 0.0));
    for (double q : {0.25, 0.5, 1.0}) {
        Vec e(static_cast<size_t>(n - 1), 0.0);
        e[0] = q * eta_max;
        out.push_back(std::move(e));
    }
    return out;
}

ExteriorDataset synthesize_exterior(const DecayFunction& f, std::vector<Vec> eta_list,
                                    std::vector<double> r_grid, const QuadratureSpec& q,
                                    const SynthesisOptions& opt) {
    const int n = f.dim();
    if (opt.u_nodes < 8) throw std::invalid_argument("synthesize_exterior: u_nodes too small");
    ExteriorDataset out;
    out.n = n;
    out.eta_list = std::move(eta_list);
    out.r_grid = std::move(r_grid);
    out.g.assign(out.eta_list.size(), std::vector<Complex>(out.r_grid.size()));
    out.provenance = ExteriorDataset::Provenance::SynthesizedFromF;
    out.validate();

    const double u_max = 2.0 * out.r_grid.back();
    const double du = u_max / opt.u_nodes;
    const Rule1D th = gauss_legendre(opt.theta_nodes, 0.0, std::numbers::pi);

    parallel_over(out.eta_list.size(), opt.threads, [&](size_t ei) {
        const Vec& eta = out.eta_list[ei];
        const double k = norm2(eta);
        // F(u) = f~(eta', u) / u^{n-1} on a uniform internal grid.
        std::vector<Complex> F(static_cast<size_t>(opt.u_nodes));
        for (int j = 1; j <= opt.u_nodes; ++j) {
            const double u = du * j;
            F[static_cast<size_t>(j - 1)] =
                fourier_slice(f, eta, u, q).value / std::pow(u, n - 1.0);
        }
        const SliceInterpolant interp(du, du, std::move(F));
        for (size_t ri = 0; ri < out.r_grid.size(); ++ri) {
            const double r = out.r_grid[ri];
            Complex acc{0.0, 0.0};
            for (size_t i = 0; i < th.nodes.size(); ++i) {
                const double u = r * (1.0 - std::cos(th.nodes[i]));
                const double x = r * std::sin(th.nodes[i]);
                acc += th.weights[i] * interp(u) * sphere_phase_integral(x * k, n) *
                       std::pow(x, n - 2.0);
            }
            out.g[ei][ri] = r * acc;
        }
    });
    return out;
}

namespace {

std::vector<double> s_grid_of(const ExteriorDataset& d) {
    std::vector<double> s(d.r_grid.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = 2.0 * d.r_grid[i];
    return s;
}

double diag_arg(double s, double t) { return std::sqrt(std::max(t * (s - t), 0.0)); }

SliceData finish(const ExteriorDataset& d, size_t ei, const std::vector<double>& s_grid,
                 std::vector<Complex> solved, int unknown_u_power) {
    // solved = u^p F(u) with F = f~ / u^{n-1}.
    SliceData out;
    out.eta = d.eta_list[ei];
    out.u_grid = s_grid;
    out.values.resize(solved.size());
    for (size_t i = 0; i < solved.size(); ++i)
        out.values[i] = solved[i] * std::pow(s_grid[i], d.n - 1.0 - unknown_u_power);
    return out;
}

}  // namespace

SliceData reconstruct_slice(const ExteriorDataset& data, size_t eta_index) {
    data.validate();
    if (data.n != 2 && data.n != 3)
        throw std::invalid_argument("reconstruct_slice: direct route supports n in {2, 3}");
    if (eta_index >= data.eta_list.size()) throw std::invalid_argument("reconstruct_slice: bad eta index");
    if (data.r_grid.size() < 16)
        throw std::invalid_argument("reconstruct_slice: data grid too coarse (fewer than 16 nodes)");

    const std::vector<double> s = s_grid_of(data);
    KernelEquation eq = assemble_kernel_equation(data.eta_list[eta_index], data.n, s,
                                                 data.g[eta_index]);
    const auto H = eq.H;
    const auto Hpx = eq.H_prime_over_x;
    std::vector<Complex> solved;
    if (data.n == 3) {
        volterra::Kernel K = [H](double a, double t) { return H(diag_arg(a, t)); };
        volterra::Kernel dK = [Hpx](double a, double t) { return 0.5 * t * Hpx(diag_arg(a, t)); };
        solved = volterra::solve_first_kind(s, K, dK, eq.rhs);
    } else {
        // (su - u^2)^{-1/2} = (s - u)^{-1/2} u^{-1/2}: Abel weight in (s - u),
        // the u^{-1/2} folded into G.
        volterra::Kernel G = [H](double a, double t) { return H(diag_arg(a, t)) / std::sqrt(t); };
        volterra::AbelOptions abel;
        abel.G_s = [Hpx](double a, double t) {
            return 0.5 * std::sqrt(t) * Hpx(diag_arg(a, t));
        };
        solved = volterra::solve_abel(s, 0.5, G, eq.rhs, abel);
    }
    return finish(data, eta_index, s, std::move(solved), eq.unknown_u_power);
}

SliceData reconstruct_slice_reduced(const ExteriorDataset& data, size_t eta_index) {
    data.validate();
    if (data.n != 4 && data.n != 5)
        throw std::invalid_argument("reconstruct_slice_reduced: supports n in {4, 5}");
    if (eta_index >= data.eta_list.size())
        throw std::invalid_argument("reconstruct_slice_reduced: bad eta index");
    if (data.r_grid.size() < 128)
        throw std::invalid_argument(
            "reconstruct_slice_reduced: data too coarse for the numerical s-derivatives "
            "(need >= 128 nodes)");

    const std::vector<double> s = s_grid_of(data);
    KernelEquation eq = assemble_kernel_equation(data.eta_list[eta_index], data.n, s,
                                                 data.g[eta_index]);
    std::vector<Complex> solved;
    int u_power = 0;
    if (data.n == 4) {
        const KernelEquation red = volterra::reduce_even_step(eq);
        const auto H1 = red.H;
        const auto H1px = red.H_prime_over_x;
        volterra::Kernel G = [H1](double a, double t) { return H1(diag_arg(a, t)) / std::sqrt(t); };
        volterra::AbelOptions abel;
        abel.G_s = [H1px](double a, double t) {
            return 0.5 * std::sqrt(t) * H1px(diag_arg(a, t));
        };
        solved = volterra::solve_abel(s, 0.5, G, red.rhs, abel);
        u_power = red.unknown_u_power;
    } else {
        // n = 5 kernel H(x) (su - u^2) vanishes on the diagonal to first
        // order; two derivatives produce the second-kind form.
        const auto H = eq.H;
        const auto Hpx = eq.H_prime_over_x;
        const auto Hs = eq.H_second;
        volterra::Kernel K = [H](double a, double t) { return H(diag_arg(a, t)) * t * (a - t); };
        volterra::Kernel dK1 = [H, Hpx](double a, double t) {
            const double x = diag_arg(a, t);
            return 0.5 * t * (Hpx(x) * x * x + 2.0 * H(x));
        };
        volterra::Kernel dK2 = [Hpx, Hs](double a, double t) {
            const double x = diag_arg(a, t);
            return 0.25 * t * t * (Hs(x) + 3.0 * Hpx(x));
        };
        const auto red = volterra::reduce_diagonal_vanishing(s, 2, K, dK1, dK2, eq.rhs);
        solved = volterra::solve_second_kind(red.grid, red.K, red.rhs);
        u_power = eq.unknown_u_power;
    }
    return finish(data, eta_index, s, std::move(solved), u_power);
}

SliceData reconstruct(const ExteriorDataset& data, size_t eta_index) {
    if (data.n <= 3) return reconstruct_slice(data, eta_index);
    return reconstruct_slice_reduced(data, eta_index);
}

SupportReport verify_support(const DecayFunction& f, double delta, const QuadratureSpec& q,
                             const VerifySupportOptions& opt) {
    const int n = f.dim();
    if (!(delta > 0.0)) throw std::invalid_argument("verify_support: delta must be > 0");

    // Spot-check the support claim below height 1 + delta/2.
    for (int i = 1; i <= 200; ++i) {
        Vec x(static_cast<size_t>(n - 1));
        for (int k = 0; k < n - 1; ++k)
            x[static_cast<size_t>(k)] =
                8.0 * (radical_inverse(static_cast<unsigned long long>(i), kPrimes[k + 1]) - 0.5);
        const double h =
            (1.0 + 0.5 * delta) * radical_inverse(static_cast<unsigned long long>(i), kPrimes[0]);
        if (h <= 0.0) continue;
        if (std::abs(f(PointH(std::move(x), h))) > 1e-12)
            throw std::invalid_argument(
                "verify_support: field is not supported in {x_n >= 1 + delta}");
    }

    SupportReport rep;
    rep.data_tolerance = opt.data_tolerance;
    rep.slice_tolerance = opt.slice_tolerance;

    // Forward direction: the transform over a sampled exterior family.
    for (int i = 1; i <= opt.contact_samples; ++i) {
        Vec contact(static_cast<size_t>(n - 1));
        for (int k = 0; k < n - 1; ++k)
            contact[static_cast<size_t>(k)] =
                6.0 * (radical_inverse(static_cast<unsigned long long>(i), kPrimes[k]) - 0.5);
        for (int j = 1; j <= opt.radius_samples; ++j) {
            const double r = 0.5 * j / opt.radius_samples;
            rep.max_data_magnitude =
                std::max(rep.max_data_magnitude, std::abs(transform_sphere(f, contact, r, q).value));
        }
    }

    // Inverse direction: synthesize exterior data and reconstruct.
    std::vector<double> r_grid(128);
    for (size_t i = 0; i < r_grid.size(); ++i)
        r_grid[i] = 0.5 * static_cast<double>(i + 1) / static_cast<double>(r_grid.size());
    ExteriorDataset data =
        synthesize_exterior(f, default_frequencies(n, opt.eta_max), r_grid, q, opt.synthesis);
    rep.max_data_magnitude = std::max(rep.max_data_magnitude, data.max_magnitude());

    rep.per_frequency_max.resize(data.eta_list.size(), 0.0);
    for (size_t ei = 0; ei < data.eta_list.size(); ++ei) {
        const SliceData slice = reconstruct(data, ei);
        double mx = 0.0;
        for (const Complex& v : slice.values) mx = std::max(mx, std::abs(v));
        rep.per_frequency_max[ei] = mx;
        rep.max_slice_magnitude = std::max(rep.max_slice_magnitude, mx);
    }
    rep.consistent_with_zero = rep.max_slice_magnitude <= rep.slice_tolerance;
    return rep;
}

// ---------------------------------------------------------------------------
// Dataset serialization
// ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_dataset(std::ostream& os, const ExteriorDataset& d) {
    d.validate();
    os << "horoct-dataset 1\n";
    os << "n " << d.n << "\n";
    os << "eta_count " << d.eta_list.size() << "\n";
    for (const auto& e : d.eta_list) {
        os << "eta";
        for (double v : e) os << ' ' << fmt17(v);
        os << "\n";
    }
    os << "r_count " << d.r_grid.size() << "\n";
    for (double r : d.r_grid) os << "r " << fmt17(r) << "\n";
    os << "data\n";
    for (const auto& row : d.g)
        for (const Complex& v : row) os << fmt17(v.real()) << ' ' << fmt17(v.imag()) << "\n";
}

void write_dataset_file(const std::string& path, const ExteriorDataset& d) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_dataset_file: cannot open " + path);
    write_dataset(os, d);
    if (!os) throw std::runtime_error("write_dataset_file: write failed for " + path);
}

ExteriorDataset read_dataset(std::istream& is) {
    auto fail = [](const std::string& what) -> ExteriorDataset {
        throw std::runtime_error("read_dataset: malformed dataset (" + what + ")");
    };
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "horoct-dataset" || version != 1)
        return fail("header");
    ExteriorDataset d;
    size_t eta_count = 0, r_count = 0;
    if (!(is >> tag >> d.n) || tag != "n") return fail("dimension");
    if (!(is >> tag >> eta_count) || tag != "eta_count") return fail("eta_count");
    for (size_t i = 0; i < eta_count; ++i) {
        if (!(is >> tag) || tag != "eta") return fail("eta row");
        Vec e(static_cast<size_t>(d.n - 1));
        for (double& v : e)
            if (!(is >> v)) return fail("eta value");
        d.eta_list.push_back(std::move(e));
    }
    if (!(is >> tag >> r_count) || tag != "r_count") return fail("r_count");
    d.r_grid.resize(r_count);
    for (double& r : d.r_grid)
        if (!(is >> tag >> r) || tag != "r") return fail("r row");
    if (!(is >> tag) || tag != "data") return fail("data marker");
    d.g.assign(eta_count, std::vector<Complex>(r_count));
    for (auto& row : d.g)
        for (Complex& v : row) {
            double re = 0.0, im = 0.0;
            if (!(is >> re >> im)) return fail("data value");
            v = Complex{re, im};
        }
    d.provenance = ExteriorDataset::Provenance::LoadedFromFile;
    d.validate();
    return d;
}

ExteriorDataset read_dataset_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_dataset_file: cannot open " + path);
    return read_dataset(is);
}

}  // namespace horoct
