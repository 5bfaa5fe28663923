#include "horoct/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace horoct::fields {

double bump(double t, double lo, double hi) {
    const double w = (2.0 * t - (lo + hi)) / (hi - lo);
    if (std::abs(w) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - w * w));
}

DecayFunction gaussian_bump(int n, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("gaussian_bump: a must be > 0");
    return DecayFunction(n, 100.0, [n, a](const PointH& p) {
        const double d = distance(PointH::origin(n), p);
        return std::exp(-a * d * d);
    });
}

DecayFunction vertical_bump(int n, double lo, double hi, double width) {
    if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("vertical_bump: need 0 < lo < hi");
    if (!(width > 0.0)) throw std::invalid_argument("vertical_bump: width must be > 0");
    return DecayFunction(n, 100.0, [lo, hi, width](const PointH& p) {
        const double b = bump(p.height(), lo, hi);
        if (b == 0.0) return 0.0;
        double s = 0.0;
        for (double x : p.x_prime()) s += x * x;
        return std::exp(-width * s) * b;
    });
}

DecayFunction table_field(int n, std::vector<double> heights, std::vector<double> values) {
    if (heights.size() != values.size() || heights.size() < 2)
        throw std::invalid_argument("table_field: need matching tables with >= 2 rows");
    for (size_t i = 1; i < heights.size(); ++i)
        if (!(heights[i] > heights[i - 1]))
            throw std::invalid_argument("table_field: heights must be increasing");
    return DecayFunction(n, 100.0, [h = std::move(heights), v = std::move(values)](const PointH& p) {
        const double t = p.height();
        if (t <= h.front() || t >= h.back()) return 0.0;
        size_t k = 1;
        while (h[k] < t) ++k;
        const double b = v[k - 1] + (v[k] - v[k - 1]) * (t - h[k - 1]) / (h[k] - h[k - 1]);
        double s = 0.0;
        for (double x : p.x_prime()) s += x * x;
        return std::exp(-s) * b;
    });
}

DecayFunction make_field(const std::string& name, int n,
                         const std::map<std::string, double>& params) {
    auto get = [&params](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "zero") return DecayFunction::zero(n);
    if (name == "gaussian-bump") return gaussian_bump(n, get("a", 1.0));
    if (name == "vertical-bump")
        return vertical_bump(n, get("lo", 0.2), get("hi", 0.8), get("width", 1.0));
    throw std::invalid_argument("make_field: unknown field '" + name + "'");
}

}  // namespace horoct::fields
