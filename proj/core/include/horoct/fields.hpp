#pragma once

#include <map>
#include <string>
#include <vector>

#include "horoct/field.hpp"

namespace horoct::fields {

// Smooth compactly supported bump on [lo, hi], equal to 1 at the midpoint.
double bump(double t, double lo, double hi);

// exp(-a d(0,x)^2): superexponential decay in hyperbolic distance.
DecayFunction gaussian_bump(int n, double a = 1.0);

// exp(-width |x'|^2) * bump(x_n; lo, hi): compactly supported in height.
DecayFunction vertical_bump(int n, double lo, double hi, double width = 1.0);

// exp(-|x'|^2) times a piecewise-linear height profile (zero outside the
// tabulated range).
DecayFunction table_field(int n, std::vector<double> heights, std::vector<double> values);

// Named lookup used by the CLI: "zero", "gaussian-bump", "vertical-bump".
// Parameters: a (gaussian), lo/hi/width (vertical bump).
DecayFunction make_field(const std::string& name, int n,
                         const std::map<std::string, double>& params);

}  // namespace horoct::fields
