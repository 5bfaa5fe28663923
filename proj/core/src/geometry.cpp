#include "horoct/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace horoct {

namespace {

double sqnorm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

PointH::PointH(Vec x_prime, double height) : x_prime_(std::move(x_prime)), height_(height) {
    if (!(height_ > 0.0) || !std::isfinite(height_))
        throw std::invalid_argument("PointH: height must be strictly positive");
    for (double c : x_prime_)
        if (!std::isfinite(c)) throw std::invalid_argument("PointH: non-finite coordinate");
}

PointH PointH::origin(int n) {
    if (n < 2) throw std::invalid_argument("PointH::origin: n must be >= 2");
    return PointH(Vec(static_cast<size_t>(n - 1), 0.0), 1.0);
}

Horocycle Horocycle::plane(double height) {
    if (!(height > 0.0)) throw std::invalid_argument("Horocycle::plane: height must be > 0");
    return Horocycle(PlaneHorocycle{height});
}

Horocycle Horocycle::sphere(Vec contact, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Horocycle::sphere: radius must be > 0");
    return Horocycle(SphereHorocycle{std::move(contact), radius});
}

double distance(const PointH& p, const PointH& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double horiz = 0.0;
    for (size_t i = 0; i < p.x_prime().size(); ++i) {
        const double d = p.x_prime()[i] - q.x_prime()[i];
        horiz += d * d;
    }
    const double dh = p.height() - q.height();
    const double c = 1.0 + (horiz + dh * dh) / (2.0 * p.height() * q.height());
    // acosh(1 + t) loses precision for tiny t; use the expansion sqrt(2t).
    const double t = c - 1.0;
    if (t < 1e-12) return std::sqrt(2.0 * t);
    return std::acosh(c);
}

PointH apply_isometry(const Isometry& iso, const PointH& p) {
    if (const auto* tr = std::get_if<HorizontalTranslation>(&iso)) {
        if (tr->shift.size() != p.x_prime().size())
            throw std::invalid_argument("apply_isometry: translation dimension mismatch");
        Vec x = p.x_prime();
        for (size_t i = 0; i < x.size(); ++i) x[i] += tr->shift[i];
        return PointH(std::move(x), p.height());
    }
    if (const auto* dl = std::get_if<Dilation>(&iso)) {
        if (!(dl->factor > 0.0)) throw std::invalid_argument("apply_isometry: dilation factor must be > 0");
        Vec x = p.x_prime();
        for (double& c : x) c *= dl->factor;
        return PointH(std::move(x), p.height() * dl->factor);
    }
    // Inversion x -> x / |x|^2.
    const double s = sqnorm(p.x_prime()) + p.height() * p.height();
    if (s == 0.0) throw std::invalid_argument("apply_isometry: inversion undefined at 0");
    Vec x = p.x_prime();
    for (double& c : x) c /= s;
    return PointH(std::move(x), p.height() / s);
}

PointH apply_isometry(const IsometryChain& chain, const PointH& p) {
    PointH q = p;
    for (const auto& iso : chain) q = apply_isometry(iso, q);
    return q;
}

Isometry invert(const Isometry& iso) {
    if (const auto* tr = std::get_if<HorizontalTranslation>(&iso)) {
        Vec s = tr->shift;
        for (double& c : s) c = -c;
        return HorizontalTranslation{std::move(s)};
    }
    if (const auto* dl = std::get_if<Dilation>(&iso)) return Dilation{1.0 / dl->factor};
    return Inversion{};
}

IsometryChain invert(const IsometryChain& chain) {
    IsometryChain out;
    out.reserve(chain.size());
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(invert(*it));
    return out;
}

IsometryChain sphere_to_plane_isometry(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_to_plane_isometry: r must be > 0");
    // Points of the sphere with contact 0 and radius r satisfy |x|^2 = 2 r x_n,
    // so the inversion sends them to height x_n / |x|^2 = 1/(2r).
    return IsometryChain{Inversion{}};
}

bool lies_outside(const Horocycle& xi, const Horocycle& xi0) {
    if (!xi0.is_plane() || xi0.as_plane().height != 1.0)
        throw std::invalid_argument("lies_outside: xi0 must be normalized to the plane x_n = 1");
    if (xi.is_plane()) return xi.as_plane().height <= 1.0;
    return 2.0 * xi.as_sphere().radius <= 1.0;
}

PointH sphere_horocycle_point(const Vec& contact, double r, double theta, const Vec& omega) {
    if (contact.size() != omega.size())
        throw std::invalid_argument("sphere_horocycle_point: dimension mismatch");
    const double rs = r * std::sin(theta);
    Vec x = contact;
    for (size_t i = 0; i < x.size(); ++i) x[i] += rs * omega[i];
    return PointH(std::move(x), r * (1.0 - std::cos(theta)));
}

}  // namespace horoct
