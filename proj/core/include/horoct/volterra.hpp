#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "horoct/slice.hpp"

namespace horoct::volterra {

using Kernel = std::function<double(double s, double t)>;

// ---------------------------------------------------------------------------
// Grid utilities
// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double a, double b, int n);

void check_grid(const std::vector<double>& grid);

// Derivative of grid samples by local 5-point Lagrange differentiation
// (4th order on smooth data, also valid on non-uniform grids).
template <typename S>
std::vector<S> derivative_on_grid(const std::vector<double>& grid, const std::vector<S>& values) {
    const int n = static_cast<int>(grid.size());
    if (static_cast<int>(values.size()) != n) throw std::invalid_argument("derivative_on_grid: size mismatch");
    if (n < 2) throw std::invalid_argument("derivative_on_grid: need at least 2 nodes");
    const int width = std::min(5, n);
    std::vector<S> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int lo = std::clamp(i - width / 2, 0, n - width);
        S acc{};
        for (int j = lo; j < lo + width; ++j) {
            // d/dx of the j-th Lagrange basis at grid[i].
            double w = 0.0;
            for (int m = lo; m < lo + width; ++m) {
                if (m == j) continue;
                double prod = 1.0;
                for (int l = lo; l < lo + width; ++l) {
                    if (l == j || l == m) continue;
                    prod *= (grid[static_cast<size_t>(i)] - grid[static_cast<size_t>(l)]);
                }
                w += prod;
            }
            double denom = 1.0;
            for (int l = lo; l < lo + width; ++l)
                if (l != j) denom *= (grid[static_cast<size_t>(j)] - grid[static_cast<size_t>(l)]);
            acc += (w / denom) * values[static_cast<size_t>(j)];
        }
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

// Numerical d^order/ds^order of a kernel in its first argument, stencil kept
// inside [a, b].
double kernel_s_derivative(const Kernel& K, int order, double s, double t, double a, double b,
                           double step);

// ---------------------------------------------------------------------------
// Second kind:  phi(s) + int_a^s K(s,t) phi(t) dt = f(s)
// ---------------------------------------------------------------------------

struct SecondKindProblem {
    double a = 0.0, b = 1.0;
    Kernel K;
    std::function<double(double)> f;
    int grid_n = 129;
};

// Product-trapezoidal stepping; O(h^2) on smooth data, phi == 0 exactly for
// f == 0.  Throws on a singular step 1 + w_ii K(s_i, s_i) ~ 0.
template <typename S>
std::vector<S> solve_second_kind(const std::vector<double>& grid, const Kernel& K,
                                 const std::vector<S>& f) {
    check_grid(grid);
    const size_t n = grid.size();
    if (f.size() != n) throw std::invalid_argument("solve_second_kind: rhs size mismatch");
    std::vector<S> phi(n);
    phi[0] = f[0];
    for (size_t i = 1; i < n; ++i) {
        const double s = grid[i];
        S acc = f[i];
        for (size_t j = 0; j < i; ++j) {
            // Trapezoid weight of node j on [a, s_i].
            const double wl = (j == 0) ? 0.0 : grid[j] - grid[j - 1];
            const double wr = grid[j + 1] - grid[j];
            acc -= 0.5 * (wl + wr) * K(s, grid[j]) * phi[j];
        }
        const double diag = 1.0 + 0.5 * (grid[i] - grid[i - 1]) * K(s, s);
        if (std::abs(diag) < 1e-12)
            throw std::runtime_error("solve_second_kind: singular step at node " + std::to_string(i));
        phi[i] = acc / diag;
    }
    return phi;
}

std::vector<double> solve_second_kind(const SecondKindProblem& p);

// ---------------------------------------------------------------------------
// First kind:  int_a^s K(s,t) psi(t) dt = f(s),  K(s,s) != 0
// ---------------------------------------------------------------------------

// Reduced to second kind by differentiation in s.  dK_ds may be empty, in
// which case it is replaced by a finite-difference derivative (4th order,
// step tied to the grid spacing); *used_fd_kernel is set when that happens.
// Requires |K(s,s)| >= 1e-10 on the grid ("diagonal degeneracy" otherwise)
// and the compatibility condition f(a) = 0 within 1e-8 relative to ||f||.
template <typename S>
std::vector<S> solve_first_kind(const std::vector<double>& grid, const Kernel& K,
                                const Kernel& dK_ds, const std::vector<S>& f,
                                bool* used_fd_kernel = nullptr) {
    check_grid(grid);
    const size_t n = grid.size();
    if (f.size() != n) throw std::invalid_argument("solve_first_kind: rhs size mismatch");
    const double a = grid.front(), b = grid.back();
    for (double s : grid)
        if (std::abs(K(s, s)) < 1e-10)
            throw std::runtime_error("solve_first_kind: diagonal degeneracy, |K(s,s)| < 1e-10 at s = " +
                                     std::to_string(s));
    double fmax = 0.0;
    for (const S& v : f) fmax = std::max(fmax, std::abs(v));
    if (std::abs(f[0]) > 1e-8 * std::max(1.0, fmax))
        throw std::runtime_error("solve_first_kind: incompatible data, f(a) != 0");

    const double step = 0.5 * (b - a) / static_cast<double>(n - 1);
    Kernel ks = dK_ds;
    if (!ks) {
        ks = [K, a, b, step](double s, double t) { return kernel_s_derivative(K, 1, s, t, a, b, step); };
        if (used_fd_kernel) *used_fd_kernel = true;
    } else if (used_fd_kernel) {
        *used_fd_kernel = false;
    }

    const std::vector<S> df = derivative_on_grid(grid, f);
    std::vector<S> rhs(n);
    for (size_t i = 0; i < n; ++i) rhs[i] = df[i] / K(grid[i], grid[i]);
    Kernel K2 = [K, ks](double s, double t) { return ks(s, t) / K(s, s); };
    return solve_second_kind(grid, K2, rhs);
}

// ---------------------------------------------------------------------------
// Generalized Abel:  int_a^s G(s,t) (s-t)^{-alpha} phi(t) dt = f(s)
// ---------------------------------------------------------------------------

struct AbelOptions {
    int quad_nodes = 24;     // Gauss-Legendre nodes per desingularized piece
    double fd_step = 1e-4;   // step for the finite-difference G_s
    Kernel G_s;              // analytic dG/ds, finite differences when empty
};

// Weakly singular fractional integral int_a^x (x - s)^{alpha-1} v(s) ds by
// product integration with exact moments of the weight (v piecewise linear).
template <typename S>
std::vector<S> fractional_integral(const std::vector<double>& grid, double alpha,
                                   const std::vector<S>& v) {
    check_grid(grid);
    const size_t n = grid.size();
    if (v.size() != n) throw std::invalid_argument("fractional_integral: size mismatch");
    std::vector<S> out(n, S{});
    for (size_t i = 1; i < n; ++i) {
        const double x = grid[i];
        S acc{};
        for (size_t j = 0; j + 1 <= i; ++j) {
            const double s0 = grid[j], s1 = grid[j + 1], h = s1 - s0;
            const double w0 = x - s0, w1 = x - s1;
            const double m0 = (std::pow(w0, alpha) - std::pow(w1, alpha)) / alpha;
            const double m1 = x * m0 - (std::pow(w0, alpha + 1.0) - std::pow(w1, alpha + 1.0)) / (alpha + 1.0);
            acc += v[j] * m0 + (v[j + 1] - v[j]) * ((m1 - s0 * m0) / h);
        }
        out[i] = acc;
    }
    return out;
}

// Gauss-Legendre nodes on [0, 1], cached per node count.
const Rule1D& unit_rule(int nodes);

// Fractional integral of a continuous integrand, one value per grid node.
// After scaling to int_0^1 (1-w)^{alpha-1} f(a + (x-a) w) dw the two halves
// are desingularized by power substitutions (w = y^2/2 near 0, which also
// absorbs a root-type singularity of f at a; 1-w = z^{1/alpha}/2 near 1,
// which removes the weight exactly) and integrated by Gauss-Legendre.
// Sampled product integration loses an order when f is singular at a; this
// route does not.
template <typename S>
std::vector<S> fractional_integral(const std::vector<double>& grid, double alpha,
                                   const std::function<S(double)>& f, int quad_nodes = 32) {
    check_grid(grid);
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("fractional_integral: alpha must be in (0,1)");
    const Rule1D& rule = unit_rule(quad_nodes);
    const double a = grid.front();
    std::vector<S> out(grid.size(), S{});
    for (size_t i = 1; i < grid.size(); ++i) {
        const double x = grid[i];
        const double span = x - a;
        S lower{}, upper{};
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
            const double y = rule.nodes[k], z = rule.nodes[k];
            const double wl = 0.5 * y * y;
            lower += rule.weights[k] * (std::pow(1.0 - wl, alpha - 1.0) * y) * f(a + span * wl);
            const double wu = 1.0 - 0.5 * std::pow(z, 1.0 / alpha);
            upper += rule.weights[k] * f(a + span * wu);
        }
        upper *= std::pow(0.5, alpha) / alpha;
        out[i] = std::pow(span, alpha) * (lower + upper);
    }
    return out;
}

// Kernel of the preconditioned equation,
//   Ktilde(x,t) = int_0^1 w^{-alpha} (1-w)^{alpha-1} G(t + (x-t) w, t) dw,
// with both endpoint singularities removed by power substitutions.
// Ktilde(t,t) = G(t,t) * pi / sin(pi alpha).
double abel_preconditioned_kernel(const Kernel& G, double alpha, double x, double t,
                                  int quad_nodes);

// d(Ktilde)/dx: same integral with an extra factor w on G_s.
double abel_preconditioned_kernel_dx(const Kernel& G_s, double alpha, double x, double t,
                                     int quad_nodes);

// Solves the generalized Abel equation by integrating against the weight
// (x - s)^{alpha - 1}, which turns it into a first-kind Volterra equation
// with diagonal G(s,s) pi / sin(pi alpha), then differentiating.
// Requires f(a) = 0 and |G(s,s)| > 0 on the grid.
template <typename S>
std::vector<S> solve_abel(const std::vector<double>& grid, double alpha, const Kernel& G,
                          const std::vector<S>& f, const AbelOptions& opt = {}) {
    check_grid(grid);
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("solve_abel: alpha must be in (0,1)");
    for (double s : grid)
        if (std::abs(G(s, s)) < 1e-12)
            throw std::runtime_error("solve_abel: G vanishes on the diagonal at s = " + std::to_string(s));
    const double a = grid.front(), b = grid.back();
    const std::vector<S> rhs = fractional_integral(grid, alpha, f);
    const int q = opt.quad_nodes;
    Kernel Kt = [&G, alpha, q](double x, double t) {
        return abel_preconditioned_kernel(G, alpha, x, t, q);
    };
    const double fd = opt.fd_step;
    Kernel Gs = opt.G_s;
    if (!Gs) Gs = [G, a, b, fd](double s, double t) { return kernel_s_derivative(G, 1, s, t, a, b, fd); };
    Kernel dKt = [Gs, alpha, q](double x, double t) {
        return abel_preconditioned_kernel_dx(Gs, alpha, x, t, q);
    };
    return solve_first_kind(grid, Kt, dKt, rhs);
}

// Abel solve from a continuous right-hand side.  Same reduction as above,
// but the preconditioning integral is evaluated by the desingularized
// quadrature, which keeps full accuracy when f carries the root-type
// behavior near a that Abel data typically has (f = 2 sqrt(s) and friends).
template <typename S>
std::vector<S> solve_abel(const std::vector<double>& grid, double alpha, const Kernel& G,
                          const std::function<S(double)>& f, const AbelOptions& opt = {}) {
    check_grid(grid);
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("solve_abel: alpha must be in (0,1)");
    for (double s : grid)
        if (std::abs(G(s, s)) < 1e-12)
            throw std::runtime_error("solve_abel: G vanishes on the diagonal at s = " + std::to_string(s));
    const double a = grid.front(), b = grid.back();
    const std::vector<S> rhs = fractional_integral(grid, alpha, f, std::max(32, opt.quad_nodes));
    const int q = opt.quad_nodes;
    Kernel Kt = [&G, alpha, q](double x, double t) {
        return abel_preconditioned_kernel(G, alpha, x, t, q);
    };
    const double fd = opt.fd_step;
    Kernel Gs = opt.G_s;
    if (!Gs) Gs = [G, a, b, fd](double s, double t) { return kernel_s_derivative(G, 1, s, t, a, b, fd); };
    Kernel dKt = [Gs, alpha, q](double x, double t) {
        return abel_preconditioned_kernel_dx(Gs, alpha, x, t, q);
    };
    return solve_first_kind(grid, Kt, dKt, rhs);
}

// Plain Abel convenience: G == 1.
template <typename S>
std::vector<S> solve_abel_plain(const std::vector<double>& grid, double alpha,
                                const std::vector<S>& f) {
    return solve_abel(grid, alpha, [](double, double) { return 1.0; }, f);
}

template <typename S>
std::vector<S> solve_abel_plain(const std::vector<double>& grid, double alpha,
                                const std::function<S(double)>& f) {
    return solve_abel(grid, alpha, [](double, double) { return 1.0; }, f);
}

// ---------------------------------------------------------------------------
// Diagonal-vanishing reduction (odd-dimension route)
// ---------------------------------------------------------------------------

// Second-kind problem produced by differentiating a first-kind equation
// whose kernel vanishes on the diagonal to order m-2.
template <typename S>
struct ReducedSecondKind {
    std::vector<double> grid;
    Kernel K;             // kernel K^{(m)}(s,t) / K^{(m-1)}(s,s)
    std::vector<S> rhs;   // f^{(m)}(s) / K^{(m-1)}(s,s)
    bool fd_warning = false;  // numerical differentiation was used somewhere
};

// dKm1/dKm are d^{m-1}K/ds^{m-1} and d^m K/ds^m; either may be empty, in
// which case finite differences of K are used (order-loss warning).
// Checks numerically that K vanishes on the diagonal and that the
// (m-1)-st derivative does not.
template <typename S>
ReducedSecondKind<S> reduce_diagonal_vanishing(const std::vector<double>& grid, int m,
                                               const Kernel& K, Kernel dKm1, Kernel dKm,
                                               const std::vector<S>& f) {
    check_grid(grid);
    if (m < 2) throw std::invalid_argument("reduce_diagonal_vanishing: m must be >= 2");
    if (f.size() != grid.size()) throw std::invalid_argument("reduce_diagonal_vanishing: rhs size mismatch");
    const double a = grid.front(), b = grid.back();
    const double step = 0.25 * (grid[1] - grid[0]);

    ReducedSecondKind<S> out;
    out.grid = grid;
    if (!dKm1) {
        dKm1 = [K, m, a, b, step](double s, double t) {
            return kernel_s_derivative(K, m - 1, s, t, a, b, std::max(step, 1e-3));
        };
        out.fd_warning = true;
    }
    if (!dKm) {
        dKm = [K, m, a, b, step](double s, double t) {
            return kernel_s_derivative(K, m, s, t, a, b, std::max(step, 1e-3));
        };
        out.fd_warning = true;
    }

    double kscale = 0.0;
    for (double s : grid)
        for (double t : grid) kscale = std::max(kscale, std::abs(K(s, t)));
    for (double s : grid) {
        if (std::abs(K(s, s)) > 1e-8 * std::max(1.0, kscale))
            throw std::runtime_error("reduce_diagonal_vanishing: kernel does not vanish on the diagonal");
        if (std::abs(dKm1(s, s)) < 1e-10)
            throw std::runtime_error(
                "reduce_diagonal_vanishing: (m-1)-st s-derivative vanishes on the diagonal at s = " +
                std::to_string(s));
    }

    // m-fold differentiation of the grid data loses accuracy with each pass.
    std::vector<S> dmf = f;
    for (int k = 0; k < m; ++k) dmf = derivative_on_grid(grid, dmf);

    Kernel km1 = dKm1, km = dKm;
    out.K = [km, km1](double s, double t) { return km(s, t) / km1(s, s); };
    out.rhs.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) out.rhs[i] = dmf[i] / km1(grid[i], grid[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Even-dimension induction step
// ---------------------------------------------------------------------------

// Differentiates the kernel equation for dimension n+2 in s, producing the
// dimension-n equation with
//   H1(x) = H'(x) x + (n-1) H(x),   rhs_1 = 2 d/ds rhs,
// and the unknown picking up one extra power of u (the chain rule
// contributes the factor u/2, split as u into the unknown and 1/2 into the
// right-hand side).  H1(0) = (n-1) H(0) != 0.
KernelEquation reduce_even_step(const KernelEquation& eq);

}  // namespace horoct::volterra
