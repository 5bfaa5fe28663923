#include "horoct/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace horoct {

namespace {

double clamp(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

void QuadratureSpec::validate() const {
    if (theta_nodes < 2 || sphere_nodes < 2 || plane_nodes < 2)
        throw std::invalid_argument("QuadratureSpec: node counts must be >= 2");
    if (!(plane_cutoff > 0.0)) throw std::invalid_argument("QuadratureSpec: plane_cutoff must be > 0");
}

double decay_certificate(const DecayFunction& f, double m, int budget) {
    return f.certificate(m, budget);
}

Estimate transform_sphere(const DecayFunction& f, const Vec& contact, double r,
                          const QuadratureSpec& q) {
    q.validate();
    const int n = f.dim();
    if (static_cast<int>(contact.size()) != n - 1)
        throw std::invalid_argument("transform_sphere: contact dimension mismatch");
    if (!(r > 0.0)) throw std::invalid_argument("transform_sphere: r must be > 0");
    if (f.decay_order() < static_cast<double>(n))
        throw std::runtime_error(
            "transform_sphere: integrand not integrable near the contact point; "
            "decay order must be at least the dimension n");

    const double m = std::min(f.decay_order(), static_cast<double>(n) + 6.0);
    const double cert = f.certificate(m);
    Estimate out;
    if (cert == 0.0) return out;

    const double area = sphere_area(n - 2);
    // Near the contact point (v -> +inf) the integrand is bounded by
    // cert (2r)^m e^{(n-1-2m) v}; near the top (v -> -inf) by cert e^{(n-1) v}.
    const double logc = std::log(cert * area);
    const double v_hi = clamp((logc + m * std::log(2.0 * r) + 37.0) / (2.0 * m - n + 1.0), 3.0, 80.0);
    const double v_lo = -clamp((logc + 37.0) / (n - 1.0), 3.0, 80.0);

    const SphereRule sph = sphere_rule(n - 2, q.sphere_nodes);
    // theta_nodes is calibrated to a 16-wide window; wider truncation
    // windows (small n, slow decay) get proportionally more nodes so the
    // spacing, which controls the trapezoid error, stays put.
    const int N = std::max(q.theta_nodes,
                           static_cast<int>(std::ceil(q.theta_nodes * (v_hi - v_lo) / 16.0)));
    const double h = (v_hi - v_lo) / (N - 1);

    auto slice = [&](double v) {
        const double theta = 2.0 * std::atan(std::exp(-v));
        double s = 0.0;
        for (size_t j = 0; j < sph.nodes.size(); ++j) {
            const double fv = f(sphere_horocycle_point(contact, r, theta, sph.nodes[j]));
            if (std::isnan(fv)) throw std::runtime_error("transform_sphere: NaN from field");
            s += sph.weights[j] * fv;
        }
        // dtheta/(1-cos)^{n-1} * sin^{n-2} == (sin/(1-cos))^{n-1} dv = e^{(n-1)v} dv.
        return s * std::exp((n - 1.0) * v);
    };

    double full = 0.0, coarse = 0.0;
    for (int i = 0; i < N; ++i) {
        const double g = slice(v_lo + h * i);
        const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
        full += w * g;
        if (i % 2 == 0) coarse += ((i == 0 || i == N - 1) ? 0.5 : 1.0) * g;
    }
    out.value = h * full;
    out.quad_error = std::abs(h * full - 2.0 * h * coarse);
    out.tail_bound = cert * area *
                     (std::exp(m * std::log(2.0 * r) + (n - 1.0 - 2.0 * m) * v_hi) / (2.0 * m - n + 1.0) +
                      std::exp((n - 1.0) * v_lo) / (n - 1.0));
    out.tail_warning = out.tail_bound > 1e-10;
    return out;
}

Estimate transform_plane(const DecayFunction& f, double c, const QuadratureSpec& q) {
    q.validate();
    const int n = f.dim();
    if (!(c > 0.0)) throw std::invalid_argument("transform_plane: c must be > 0");

    const double R = q.plane_cutoff;
    const double scale = std::pow(c, -(n - 1.0));
    const Rule1D axis = gauss_legendre(q.plane_nodes, -R, R);
    const Rule1D axis_half = gauss_legendre(std::max(2, q.plane_nodes / 2), -R, R);

    auto integrate = [&](const Rule1D& rule) {
        double acc = 0.0;
        tensor_iterate(rule, n - 1, [&](const Vec& x, double w) {
            const double fv = f(PointH(x, c));
            if (std::isnan(fv)) throw std::runtime_error("transform_plane: NaN from field");
            acc += w * fv;
        });
        return acc * scale;
    };

    Estimate out;
    out.value = integrate(axis);
    out.quad_error = std::abs(out.value - integrate(axis_half));
    out.tail_bound = scale * plane_truncation_tail(f, c, R);
    out.tail_warning = out.tail_bound > 1e-10;
    return out;
}

double plane_truncation_tail(const DecayFunction& f, double c, double R) {
    const int n = f.dim();
    const double m = std::min(f.decay_order(), static_cast<double>(n) + 6.0);
    const double area = sphere_area(n - 2);
    const SphereRule dirs = sphere_rule(n - 2, 8);
    // Empirical scan of the angular max of |f| on shells rho in [R, 4R].
    double shell_int = 0.0, prev_rho = R, prev_max = 0.0;
    for (int k = 0; k <= 8; ++k) {
        const double rho = R * std::pow(4.0, k / 8.0);
        double mx = 0.0;
        for (const auto& w : dirs.nodes) {
            Vec x(w.size());
            for (size_t i = 0; i < w.size(); ++i) x[i] = rho * w[i];
            mx = std::max(mx, std::abs(f(PointH(std::move(x), c))));
        }
        const double g = mx * std::pow(rho, n - 2.0);
        if (k > 0) shell_int += 0.5 * (g + prev_max) * (rho - prev_rho);
        prev_rho = rho;
        prev_max = g;
    }
    double cert = 0.0;
    try {
        cert = f.certificate(m, 512);
    } catch (const std::runtime_error&) {
        cert = std::numeric_limits<double>::infinity();
    }
    const double far = cert * std::pow(2.0 * c, m) * std::pow(4.0 * R, n - 1.0 - 2.0 * m) /
                       (2.0 * m - (n - 1.0));
    return area * (shell_int + far);
}

Estimate transform_via_isometry(const DecayFunction& f, const Vec& contact, double r,
                                const QuadratureSpec& q) {
    q.validate();
    if (!(r > 0.0)) throw std::invalid_argument("transform_via_isometry: r must be > 0");
    if (static_cast<int>(contact.size()) != f.dim() - 1)
        throw std::invalid_argument("transform_via_isometry: contact dimension mismatch");

    Vec neg = contact;
    for (double& x : neg) x = -x;
    IsometryChain sigma{HorizontalTranslation{neg}};
    const IsometryChain inv_part = sphere_to_plane_isometry(r);
    sigma.insert(sigma.end(), inv_part.begin(), inv_part.end());

    const DecayFunction pulled = f.pullback(invert(sigma));
    const double c = 1.0 / (2.0 * r);
    // Keep the truncation radius proportional to the plane height so the
    // resolution per unit feature size is independent of r.
    QuadratureSpec scaled = q;
    scaled.plane_cutoff = q.plane_cutoff * std::max(1.0, c);
    return transform_plane(pulled, c, scaled);
}

}  // namespace horoct
