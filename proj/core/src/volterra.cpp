#include "horoct/volterra.hpp"

#include "horoct/quadrature.hpp"

#include <map>
#include <mutex>

namespace horoct::volterra {

std::vector<double> uniform_grid(double a, double b, int n) {
    if (!(a < b)) throw std::invalid_argument("uniform_grid: need a < b");
    if (n < 2) throw std::invalid_argument("uniform_grid: need n >= 2");
    std::vector<double> g(static_cast<size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = a + h * i;
    g.back() = b;
    return g;
}

const Rule1D& unit_rule(int nodes) {
    if (nodes < 2) throw std::invalid_argument("unit_rule: need at least 2 nodes");
    static std::mutex mu;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(nodes);
    if (it == cache.end()) it = cache.emplace(nodes, gauss_legendre(nodes, 0.0, 1.0)).first;
    return it->second;
}

void check_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("grid must have at least 2 nodes");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
}

double kernel_s_derivative(const Kernel& K, int order, double s, double t, double a, double b,
                           double step) {
    if (order < 1 || order > 4) throw std::invalid_argument("kernel_s_derivative: order in [1,4]");
    // (2*order + 3)-point Lagrange differentiation on a stencil kept inside [a, b].
    const int pts = 2 * order + 3;
    double lo = s - 0.5 * (pts - 1) * step;
    lo = std::clamp(lo, a, b - (pts - 1) * step);
    std::vector<double> x(static_cast<size_t>(pts)), v(static_cast<size_t>(pts));
    for (int i = 0; i < pts; ++i) {
        x[static_cast<size_t>(i)] = lo + i * step;
        v[static_cast<size_t>(i)] = K(x[static_cast<size_t>(i)], t);
    }
    // Differentiate the interpolant "order" times by repeated first
    // derivatives of the sample set (exact for polynomials of degree < pts).
    std::vector<double> cur = v;
    for (int d = 0; d < order; ++d) cur = derivative_on_grid(x, cur);
    // Interpolate the derivative samples back to s (they are polynomial
    // values on the stencil).
    double acc = 0.0;
    for (int j = 0; j < pts; ++j) {
        double w = 1.0;
        for (int l = 0; l < pts; ++l) {
            if (l == j) continue;
            w *= (s - x[static_cast<size_t>(l)]) / (x[static_cast<size_t>(j)] - x[static_cast<size_t>(l)]);
        }
        acc += w * cur[static_cast<size_t>(j)];
    }
    return acc;
}

std::vector<double> solve_second_kind(const SecondKindProblem& p) {
    if (!p.K || !p.f) throw std::invalid_argument("solve_second_kind: K and f required");
    const std::vector<double> grid = uniform_grid(p.a, p.b, p.grid_n);
    std::vector<double> f(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) f[i] = p.f(grid[i]);
    return solve_second_kind(grid, p.K, f);
}

namespace {

// int_0^{1/2} w^{-alpha} (1-w)^{alpha-1} g(w) dw via w = z^{1/(1-alpha)}.
double lower_piece(const std::function<double(double)>& g, double alpha, int nodes) {
    const double p = 1.0 / (1.0 - alpha);
    const double zmax = std::pow(0.5, 1.0 / p);
    const Rule1D rule = gauss_legendre(nodes, 0.0, zmax);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double w = std::pow(rule.nodes[i], p);
        acc += rule.weights[i] * p * std::pow(1.0 - w, alpha - 1.0) * g(w);
    }
    return acc;
}

// int_{1/2}^1 w^{-alpha} (1-w)^{alpha-1} g(w) dw via 1-w = z^{1/alpha}.
double upper_piece(const std::function<double(double)>& g, double alpha, int nodes) {
    const double p = 1.0 / alpha;
    const double zmax = std::pow(0.5, alpha);
    const Rule1D rule = gauss_legendre(nodes, 0.0, zmax);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double w = 1.0 - std::pow(rule.nodes[i], p);
        acc += rule.weights[i] * p * std::pow(w, -alpha) * g(w);
    }
    return acc;
}

}  // namespace

double abel_preconditioned_kernel(const Kernel& G, double alpha, double x, double t,
                                  int quad_nodes) {
    if (x <= t + 1e-300)
        return G(t, t) * std::numbers::pi / std::sin(std::numbers::pi * alpha);
    auto g = [&](double w) { return G(t + (x - t) * w, t); };
    return lower_piece(g, alpha, quad_nodes) + upper_piece(g, alpha, quad_nodes);
}

double abel_preconditioned_kernel_dx(const Kernel& G_s, double alpha, double x, double t,
                                     int quad_nodes) {
    auto g = [&](double w) { return w * G_s(t + (x - t) * w, t); };
    return lower_piece(g, alpha, quad_nodes) + upper_piece(g, alpha, quad_nodes);
}

KernelEquation reduce_even_step(const KernelEquation& eq) {
    if (eq.n < 4 || eq.n % 2 != 0)
        throw std::invalid_argument("reduce_even_step: requires even n >= 4");
    if (!eq.H || !eq.H_prime_over_x)
        throw std::invalid_argument("reduce_even_step: H and H'/x closures required");
    if (eq.rhs.size() != eq.s_grid.size() || eq.s_grid.size() < 5)
        throw std::invalid_argument("reduce_even_step: rhs not differentiable on this grid");

    const int n_new = eq.n - 2;
    const auto H = eq.H;
    const auto Hpx = eq.H_prime_over_x;
    const auto Hs = eq.H_second;

    KernelEquation out;
    out.n = n_new;
    out.H = [H, Hpx, n_new](double x) { return Hpx(x) * x * x + (n_new - 1.0) * H(x); };
    out.H_prime_over_x = [Hpx, Hs, n_new](double x) {
        // H1'/x = H'' + n H'/x for H1 = H' x + (n-1) H.
        return Hs(x) + n_new * Hpx(x);
    };
    // H'' of the reduced multiplier needs H'''; fall back to a central
    // difference of H1 (even in x, so reflect the stencil).
    const auto H1 = out.H;
    out.H_second = [H1](double x) {
        const double h = 1e-4 * std::max(1.0, std::abs(x));
        return (-H1(std::abs(x + 2 * h)) + 16.0 * H1(std::abs(x + h)) - 30.0 * H1(std::abs(x)) +
                16.0 * H1(std::abs(x - h)) - H1(std::abs(x - 2 * h))) /
               (12.0 * h * h);
    };
    if (std::abs(out.H(0.0)) <= 1e-12)
        throw std::runtime_error("reduce_even_step: H1(0) vanishes");
    out.s_grid = eq.s_grid;
    out.rhs = derivative_on_grid(eq.s_grid, eq.rhs);
    for (auto& v : out.rhs) v *= 2.0;
    out.unknown_u_power = eq.unknown_u_power + 1;
    return out;
}

}  // namespace horoct::volterra
