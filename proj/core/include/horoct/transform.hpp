#pragma once

#include "horoct/field.hpp"
#include "horoct/geometry.hpp"
#include "horoct/quadrature.hpp"

namespace horoct {

// Node counts and truncation radii for the quadratures behind the forward
// transform and the Fourier slices.
struct QuadratureSpec {
    int theta_nodes = 96;      // trapezoid nodes for the slice-angle integral
    int sphere_nodes = 48;     // nodes per dimension on S_{n-2}
    double plane_cutoff = 8.0; // truncation radius for plane/Fourier integrals
    int plane_nodes = 96;      // Gauss-Legendre nodes per horizontal axis

    void validate() const;
};

// Quadrature value with error accounting.  tail_warning is set when the
// truncation tail bound exceeds 1e-10.
struct Estimate {
    double value = 0.0;
    double quad_error = 0.0;  // difference against the half-resolution rule
    double tail_bound = 0.0;
    bool tail_warning = false;
};

// Horocycle transform over the Sphere horocycle (contact, r): the slice
// quadrature
//   int_0^pi int_{S_{n-2}} f(contact + r sin(th) w', r (1 - cos(th)))
//       dw' (sin(th)/(1-cos(th)))^{n-2} dth/(1-cos(th)),
// computed after the substitution th = 2 arctan(e^{-v}), which turns the
// contact-point singularity into an exponentially decaying tail in v.
// Requires decay order >= n; anything weaker is rejected as
// non-integrable.
Estimate transform_sphere(const DecayFunction& f, const Vec& contact, double r,
                          const QuadratureSpec& q);

// Flat horocycle transform over the plane x_n = c:
//   int_{R^{n-1}} f(x', c) c^{-(n-1)} dx',  truncated at |x'| <= plane_cutoff.
Estimate transform_plane(const DecayFunction& f, double c, const QuadratureSpec& q);

// Cross-check route: conjugates the sphere horocycle onto the plane of
// height 1/(2r) by a horizontal translation followed by the inversion, and
// evaluates transform_plane of the pulled-back field there.
Estimate transform_via_isometry(const DecayFunction& f, const Vec& contact, double r,
                                const QuadratureSpec& q);

// Empirical decay certificate sup |f(x)| e^{m d(0,x)} (see DecayFunction).
double decay_certificate(const DecayFunction& f, double m, int budget);

// Bound on int_{|x'| > R} |f(x', c)| dx': an empirical shell scan on
// [R, 4R] plus the certificate bound e^{-m d} <= (2c)^m rho^{-2m} beyond.
// No c^{-(n-1)} volume factor.
double plane_truncation_tail(const DecayFunction& f, double c, double R);

}  // namespace horoct
