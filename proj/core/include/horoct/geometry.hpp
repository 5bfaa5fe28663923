#pragma once

#include <cstddef>
#include <variant>
#include <vector>

// Half-space model of real hyperbolic space H^n:
//   { x in R^n : x_n > 0 },   ds^2 = (dx_1^2 + ... + dx_n^2) / x_n^2.
// Points are stored as a horizontal part x' in R^{n-1} plus a height x_n.

namespace horoct {

using Vec = std::vector<double>;

class PointH {
public:
    // dim = n; x_prime must have length n-1, height strictly positive.
    PointH(Vec x_prime, double height);

    const Vec& x_prime() const { return x_prime_; }
    double height() const { return height_; }
    int dim() const { return static_cast<int>(x_prime_.size()) + 1; }

    // Origin (0,...,0,1) of H^n.
    static PointH origin(int n);

private:
    Vec x_prime_;
    double height_;
};

// Horocycles in the half-space model: planes x_n = c, or Euclidean
// (n-1)-spheres tangent to the boundary x_n = 0.  A Sphere horocycle with
// contact point x' and radius r is the Euclidean sphere of center (x', r)
// and radius r.
struct PlaneHorocycle {
    double height;  // c > 0
};
struct SphereHorocycle {
    Vec contact;    // length n-1
    double radius;  // r > 0
};

class Horocycle {
public:
    static Horocycle plane(double height);
    static Horocycle sphere(Vec contact, double radius);

    bool is_plane() const { return std::holds_alternative<PlaneHorocycle>(v_); }
    const PlaneHorocycle& as_plane() const { return std::get<PlaneHorocycle>(v_); }
    const SphereHorocycle& as_sphere() const { return std::get<SphereHorocycle>(v_); }

private:
    explicit Horocycle(std::variant<PlaneHorocycle, SphereHorocycle> v) : v_(std::move(v)) {}
    std::variant<PlaneHorocycle, SphereHorocycle> v_;
};

// Isometries of the half-space model used by the transform machinery:
// horizontal translations, dilations from the boundary origin, and the
// inversion x -> x / |x|^2 (which maps the half-space to itself).
struct HorizontalTranslation {
    Vec shift;  // length n-1
};
struct Dilation {
    double factor;  // > 0
};
struct Inversion {};

using Isometry = std::variant<HorizontalTranslation, Dilation, Inversion>;

// Applied left to right: apply(chain, p) = chain.back()( ... chain.front()(p)).
using IsometryChain = std::vector<Isometry>;

// Hyperbolic distance, closed form
//   cosh d = 1 + (|p'-q'|^2 + (p_n-q_n)^2) / (2 p_n q_n).
// Throws std::invalid_argument on dimension mismatch.
double distance(const PointH& p, const PointH& q);

PointH apply_isometry(const Isometry& iso, const PointH& p);
PointH apply_isometry(const IsometryChain& chain, const PointH& p);

Isometry invert(const Isometry& iso);
IsometryChain invert(const IsometryChain& chain);

// Composite isometry carrying the Sphere horocycle with contact 0 and
// radius r onto the Plane horocycle of height 1/(2r).
IsometryChain sphere_to_plane_isometry(double r);

// "Lying outside" predicate relative to the normalized horocycle
// xi_0 = plane {x_n = 1}: true iff xi is disjoint from the open horoball
// {x_n > 1}.  Boundary-tangent horocycles (2r = 1, or c = 1) count as
// outside.  Throws if xi_0 is not the plane of height 1.
bool lies_outside(const Horocycle& xi, const Horocycle& xi0);

// Point of the Sphere horocycle (contact, r) at slice angle theta and
// sphere direction omega in S_{n-2} (unit vector in R^{n-1}):
//   (contact + r sin(theta) omega, r (1 - cos(theta))).
PointH sphere_horocycle_point(const Vec& contact, double r, double theta, const Vec& omega);

}  // namespace horoct
