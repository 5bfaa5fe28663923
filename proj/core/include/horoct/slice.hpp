#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "horoct/field.hpp"
#include "horoct/transform.hpp"

namespace horoct {

using Complex = std::complex<double>;

struct ComplexEstimate {
    Complex value{0.0, 0.0};
    double quad_error = 0.0;
    double tail_bound = 0.0;
    bool tail_warning = false;
};

// Horizontal Fourier transform of f at height u:
//   f~(eta', u) = int_{R^{n-1}} f(x', u) e^{-i <x', eta'>} dx',
// truncated at |x'|_inf <= plane_cutoff.
ComplexEstimate fourier_slice(const DecayFunction& f, const Vec& eta, double u,
                              const QuadratureSpec& q);

// Sphere phase integral J(z) = int_{S_{n-2}} e^{-i z <e, w'>} dw' (real by
// symmetry).  Evaluated through the Bessel identity
//   J(z) = |S_{n-2}| Gamma(b) (2/z)^{b-1} J_{b-1}(z),  b = (n-1)/2,
// with the hypergeometric series for small z; n = 2 reduces to 2 cos z.
// Supported for 2 <= n <= 12 (the extra headroom feeds the derivative
// recurrences below).
double sphere_phase_integral(double z, int n);

// J'(z)/z (smooth through z = 0, J is even) and J''(z).
double sphere_phase_derivative_over_z(double z, int n);
double sphere_phase_second_derivative(double z, int n);

// Oracle route for J: direct quadrature over S_{n-2}.
double sphere_phase_integral_quadrature(double z, int n, int nodes_per_dim);

// Complex samples of f~(eta', .) on a u-grid for one frequency.
struct SliceData {
    Vec eta;
    std::vector<double> u_grid;    // strictly increasing, positive
    std::vector<Complex> values;   // f~(eta', u) per node
};

// One-dimensional normal form of the reduced transform identity:
//   int_0^s F(u) H((su-u^2)^{1/2}) (su-u^2)^{(n-3)/2} du = rhs(s),
// with unknown F(u) = f~(eta', u)/u^{n-1}.  unknown_u_power tracks extra
// powers of u folded into the unknown by the even-dimension reduction
// (the solved quantity is u^p F(u)).
struct KernelEquation {
    int n = 2;
    std::function<double(double)> H;                 // H(x), H(0) != 0
    std::function<double(double)> H_prime_over_x;    // H'(x)/x, smooth at 0
    std::function<double(double)> H_second;          // H''(x)
    std::vector<double> s_grid;
    std::vector<Complex> rhs;
    int unknown_u_power = 0;
};

// Exterior data g(eta', r) = int_{R^{n-1}} f^(Sphere(x', r)) e^{-i<x',eta'>} dx'
// for each r in r_grid (requires 2 max(r) <= 1).  This is the direct,
// oracle-grade route: a full horizontal Fourier integral of the forward
// transform per radius.
std::vector<Complex> exterior_data(const DecayFunction& f, const Vec& eta,
                                   const std::vector<double>& r_grid, const QuadratureSpec& q);

// The other side of the Fubini identity: the u-integral form
//   r int_0^{2r} f~(eta', u) u^{-(n-1)} J((2ur-u^2)^{1/2}|eta'|)
//       (2ur-u^2)^{(n-3)/2} du,
// evaluated through the angle substitution u = r(1 - cos th) with
// fourier_slice supplying the integrand.
Complex exterior_data_via_slices(const DecayFunction& f, const Vec& eta, double r,
                                 const QuadratureSpec& q, int theta_nodes = 96);

// Builds the kernel equation for frequency eta': H(x) = J(x |eta'|) and
// rhs(s) = g(eta', s/2) / (s/2), the overall factor r divided out.
KernelEquation assemble_kernel_equation(const Vec& eta, int n, std::vector<double> s_grid,
                                        std::vector<Complex> g);

// Forward application of the kernel-equation left-hand side
//   int_0^s F(u) H((su-u^2)^{1/2}) (su-u^2)^{(n-3)/2} du
// through the smoothing substitution u = (s/2)(1 - cos th).
Complex kernel_integral(int n, const std::function<double(double)>& H,
                        const std::function<Complex(double)>& F, double s, int theta_nodes = 128);

}  // namespace horoct
