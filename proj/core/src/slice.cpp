#include "horoct/slice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "horoct/quadrature.hpp"

namespace horoct {

namespace {

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// 0F1(; b; -z^2/4) by series; accurate for z up to ~6.
double hyp0f1_series(double b, double z) {
    const double w = -0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= w / (k * (b + k - 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

}  // namespace

double sphere_phase_integral(double z, int n) {
    if (n < 2 || n > 12) throw std::invalid_argument("sphere_phase_integral: n out of range [2, 12]");
    if (z < 0.0) throw std::invalid_argument("sphere_phase_integral: z must be >= 0");
    const double area = sphere_area(n - 2);
    if (n == 2) return 2.0 * std::cos(z);
    if (z < 6.0) return area * hyp0f1_series(0.5 * (n - 1.0), z);
    const double b = 0.5 * (n - 1.0);
    return area * std::tgamma(b) * std::pow(2.0 / z, b - 1.0) * std::cyl_bessel_j(b - 1.0, z);
}

double sphere_phase_derivative_over_z(double z, int n) {
    // J'(z, n)/z = -(1/(n-1)) (|S_{n-2}|/|S_n|) J(z, n+2).
    const double ratio = sphere_area(n - 2) / sphere_area(n);
    return -ratio / (n - 1.0) * sphere_phase_integral(z, n + 2);
}

double sphere_phase_second_derivative(double z, int n) {
    // J'' = d/dz [ z * (J'/z) ] = (J'/z) + z^2 * d/dz(J'/z)/z ... expand via the
    // same recurrence one level deeper.
    const double ratio = sphere_area(n - 2) / sphere_area(n);
    const double j_np2 = sphere_phase_integral(z, n + 2);
    const double jp_over_z_np2 = sphere_phase_derivative_over_z(z, n + 2);
    return -ratio / (n - 1.0) * (j_np2 + z * z * jp_over_z_np2);
}

double sphere_phase_integral_quadrature(double z, int n, int nodes_per_dim) {
    if (n < 2) throw std::invalid_argument("sphere_phase_integral_quadrature: n must be >= 2");
    if (n <= 3) {
        // Small spheres: full rule (two points, or the circle trapezoid).
        const SphereRule rule = sphere_rule(n - 2, nodes_per_dim);
        double acc = 0.0;
        for (size_t j = 0; j < rule.nodes.size(); ++j)
            acc += rule.weights[j] * std::cos(z * rule.nodes[j][0]);
        return acc;
    }
    // The integrand depends only on the polar angle against e, so the
    // sub-sphere factor integrates to its area exactly and the quadrature
    // is one-dimensional: |S_{n-3}| int_0^pi cos(z cos phi) sin^{n-3} dphi.
    // A tensor rule would replicate the same Gauss-Legendre sum over every
    // sub-sphere node at exponential cost for nothing.
    const Rule1D polar = gauss_legendre(nodes_per_dim * 4, 0.0, std::numbers::pi);
    double acc = 0.0;
    for (size_t j = 0; j < polar.nodes.size(); ++j)
        acc += polar.weights[j] * std::cos(z * std::cos(polar.nodes[j])) *
               std::pow(std::sin(polar.nodes[j]), n - 3.0);
    return sphere_area(n - 3) * acc;
}

ComplexEstimate fourier_slice(const DecayFunction& f, const Vec& eta, double u,
                              const QuadratureSpec& q) {
    q.validate();
    const int n = f.dim();
    if (static_cast<int>(eta.size()) != n - 1)
        throw std::invalid_argument("fourier_slice: eta dimension mismatch");
    if (!(u > 0.0)) throw std::invalid_argument("fourier_slice: u must be > 0");

    const double R = q.plane_cutoff;
    const Rule1D axis = gauss_legendre(q.plane_nodes, -R, R);
    const Rule1D axis_half = gauss_legendre(std::max(2, q.plane_nodes / 2), -R, R);

    auto integrate = [&](const Rule1D& rule) {
        Complex acc{0.0, 0.0};
        tensor_iterate(rule, n - 1, [&](const Vec& x, double w) {
            const double fv = f(PointH(x, u));
            if (std::isnan(fv)) throw std::runtime_error("fourier_slice: NaN from field");
            double phase = 0.0;
            for (size_t i = 0; i < x.size(); ++i) phase += x[i] * eta[i];
            acc += w * fv * Complex{std::cos(phase), -std::sin(phase)};
        });
        return acc;
    };

    ComplexEstimate out;
    out.value = integrate(axis);
    out.quad_error = std::abs(out.value - integrate(axis_half));
    // |e^{-i<x,eta>}| = 1, so the truncation tail of |f(., u)| bounds the
    // tail of the phase integral.
    out.tail_bound = plane_truncation_tail(f, u, R);
    out.tail_warning = out.tail_bound > 1e-10;
    return out;
}

std::vector<Complex> exterior_data(const DecayFunction& f, const Vec& eta,
                                   const std::vector<double>& r_grid, const QuadratureSpec& q) {
    q.validate();
    const int n = f.dim();
    if (static_cast<int>(eta.size()) != n - 1)
        throw std::invalid_argument("exterior_data: eta dimension mismatch");
    for (double r : r_grid)
        if (!(r > 0.0) || 2.0 * r > 1.0 + 1e-12)
            throw std::invalid_argument("exterior_data: radii must satisfy 0 < 2r <= 1");

    const double R = q.plane_cutoff;
    const Rule1D axis = gauss_legendre(q.plane_nodes, -R, R);
    std::vector<Complex> out;
    out.reserve(r_grid.size());
    for (double r : r_grid) {
        Complex acc{0.0, 0.0};
        tensor_iterate(axis, n - 1, [&](const Vec& x, double w) {
            const double fhat = transform_sphere(f, x, r, q).value;
            double phase = 0.0;
            for (size_t i = 0; i < x.size(); ++i) phase += x[i] * eta[i];
            acc += w * fhat * Complex{std::cos(phase), -std::sin(phase)};
        });
        out.push_back(acc);
    }
    return out;
}

Complex exterior_data_via_slices(const DecayFunction& f, const Vec& eta, double r,
                                 const QuadratureSpec& q, int theta_nodes) {
    const int n = f.dim();
    if (!(r > 0.0) || 2.0 * r > 1.0 + 1e-12)
        throw std::invalid_argument("exterior_data_via_slices: need 0 < 2r <= 1");
    const double k = norm2(eta);
    // u = r (1 - cos th) turns the integrand into
    //   r F(u) J(r sin th |eta'|) (r sin th)^{n-2},  F = f~ / u^{n-1},
    // smooth on (0, pi) for every n >= 2.
    const Rule1D th = gauss_legendre(theta_nodes, 0.0, std::numbers::pi);
    Complex acc{0.0, 0.0};
    for (size_t i = 0; i < th.nodes.size(); ++i) {
        const double theta = th.nodes[i];
        const double u = r * (1.0 - std::cos(theta));
        const Complex ft = fourier_slice(f, eta, u, q).value;
        const Complex F = ft / std::pow(u, n - 1.0);
        const double J = sphere_phase_integral(r * std::sin(theta) * k, n);
        acc += th.weights[i] * r * F * J * std::pow(r * std::sin(theta), n - 2.0);
    }
    return acc;
}

Complex kernel_integral(int n, const std::function<double(double)>& H,
                        const std::function<Complex(double)>& F, double s, int theta_nodes) {
    const double r = 0.5 * s;
    const Rule1D th = gauss_legendre(theta_nodes, 0.0, std::numbers::pi);
    Complex acc{0.0, 0.0};
    for (size_t i = 0; i < th.nodes.size(); ++i) {
        const double u = r * (1.0 - std::cos(th.nodes[i]));
        const double x = r * std::sin(th.nodes[i]);
        acc += th.weights[i] * F(u) * H(x) * std::pow(x, n - 2.0);
    }
    return acc;
}

KernelEquation assemble_kernel_equation(const Vec& eta, int n, std::vector<double> s_grid,
                                        std::vector<Complex> g) {
    if (n < 2 || n > 8) throw std::invalid_argument("assemble_kernel_equation: n out of range [2, 8]");
    if (s_grid.empty() || s_grid.size() != g.size())
        throw std::invalid_argument("assemble_kernel_equation: grid/data size mismatch");
    double prev = 0.0;
    for (double s : s_grid) {
        if (!(s > prev) || s > 1.0 + 1e-12)
            throw std::invalid_argument("assemble_kernel_equation: s_grid must be increasing in (0, 1]");
        prev = s;
    }
    const double k = norm2(eta);
    KernelEquation eq;
    eq.n = n;
    eq.H = [k, n](double x) { return sphere_phase_integral(x * k, n); };
    eq.H_prime_over_x = [k, n](double x) { return k * k * sphere_phase_derivative_over_z(x * k, n); };
    eq.H_second = [k, n](double x) { return k * k * sphere_phase_second_derivative(x * k, n); };
    if (std::abs(eq.H(0.0)) <= 1e-12)
        throw std::invalid_argument("assemble_kernel_equation: H(0) vanishes");
    eq.rhs.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) eq.rhs[i] = g[i] / (0.5 * s_grid[i]);
    eq.s_grid = std::move(s_grid);
    return eq;
}

}  // namespace horoct
