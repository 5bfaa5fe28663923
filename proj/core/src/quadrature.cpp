#include "horoct/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace horoct {

Rule1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    Rule1D r;
    r.nodes.resize(static_cast<size_t>(n));
    r.weights.resize(static_cast<size_t>(n));
    // Newton iteration from the Chebyshev-based initial guess.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[static_cast<size_t>(n - 1 - i)] = x;
        r.weights[static_cast<size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

Rule1D gauss_legendre(int n, double a, double b) {
    Rule1D r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = mid + half * r.nodes[i];
        r.weights[i] *= half;
    }
    return r;
}

double sphere_area(int d) {
    if (d < 0) throw std::invalid_argument("sphere_area: d must be >= 0");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

SphereRule sphere_rule(int d, int n_per_dim) {
    if (d < 0) throw std::invalid_argument("sphere_rule: d must be >= 0");
    if (n_per_dim < 2) throw std::invalid_argument("sphere_rule: need at least 2 nodes per dimension");
    SphereRule out;
    if (d == 0) {
        out.nodes = {{1.0}, {-1.0}};
        out.weights = {1.0, 1.0};
        return out;
    }
    if (d == 1) {
        const int m = n_per_dim;
        const double w = 2.0 * std::numbers::pi / m;
        out.nodes.reserve(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            const double phi = w * j;
            out.nodes.push_back({std::cos(phi), std::sin(phi)});
            out.weights.push_back(w);
        }
        return out;
    }
    // omega = (sin(phi) * tilde, cos(phi)), d(omega) = sin^{d-1}(phi) dphi d(tilde).
    const SphereRule sub = sphere_rule(d - 1, n_per_dim);
    const Rule1D polar = gauss_legendre(n_per_dim, 0.0, std::numbers::pi);
    out.nodes.reserve(polar.nodes.size() * sub.nodes.size());
    for (size_t i = 0; i < polar.nodes.size(); ++i) {
        const double phi = polar.nodes[i];
        const double s = std::sin(phi), c = std::cos(phi);
        const double w = polar.weights[i] * std::pow(s, d - 1);
        for (size_t j = 0; j < sub.nodes.size(); ++j) {
            std::vector<double> v(static_cast<size_t>(d) + 1);
            for (int k = 0; k < d; ++k) v[static_cast<size_t>(k)] = s * sub.nodes[j][static_cast<size_t>(k)];
            v[static_cast<size_t>(d)] = c;
            out.nodes.push_back(std::move(v));
            out.weights.push_back(w * sub.weights[j]);
        }
    }
    return out;
}

void tensor_iterate(const Rule1D& rule, int dim,
                    const std::function<void(const std::vector<double>&, double)>& visit) {
    if (dim < 1) throw std::invalid_argument("tensor_iterate: dim must be >= 1");
    const size_t n = rule.nodes.size();
    std::vector<size_t> idx(static_cast<size_t>(dim), 0);
    std::vector<double> x(static_cast<size_t>(dim));
    for (;;) {
        double w = 1.0;
        for (int k = 0; k < dim; ++k) {
            x[static_cast<size_t>(k)] = rule.nodes[idx[static_cast<size_t>(k)]];
            w *= rule.weights[idx[static_cast<size_t>(k)]];
        }
        visit(x, w);
        int k = dim - 1;
        while (k >= 0 && ++idx[static_cast<size_t>(k)] == n) {
            idx[static_cast<size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

}  // namespace horoct
