#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace horoct {

// Gauss-Legendre rule on [-1, 1].
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Rule1D gauss_legendre(int n);

// Same rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);

// Quadrature nodes for the unit sphere S_d in R^{d+1} with the surface
// measure (total weight = |S_d|).
//   d = 0: the two points {+1, -1}, weight 1 each.
//   d = 1: equispaced trapezoid on the circle (spectrally accurate).
//   d >= 2: Gauss-Legendre in the polar angle (weight sin^{d-1}) tensored
//           with a rule for S_{d-1}.
struct SphereRule {
    std::vector<std::vector<double>> nodes;  // unit vectors in R^{d+1}
    std::vector<double> weights;
};

SphereRule sphere_rule(int d, int n_per_dim);

// Surface area of S_d: |S_d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2).
double sphere_area(int d);

// Visits every node of the dim-fold tensor product of a 1D rule with the
// product weight.  Node ordering is lexicographic and fixed, so sums
// accumulated in visit order are deterministic.
void tensor_iterate(const Rule1D& rule, int dim,
                    const std::function<void(const std::vector<double>&, double)>& visit);

}  // namespace horoct
