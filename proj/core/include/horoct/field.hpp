#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "horoct/geometry.hpp"

namespace horoct {

// A scalar field on H^n with a claimed exponential decay order: the class
// of admissible inputs f of the horocycle transform.  decay_order is the
// largest m for which sup |f(x)| e^{m d(0,x)} is claimed finite.
class DecayFunction {
public:
    using Eval = std::function<double(const PointH&)>;

    DecayFunction(int dim, double decay_order, Eval eval);

    int dim() const { return dim_; }
    double decay_order() const { return decay_order_; }
    double operator()(const PointH& p) const { return eval_(p); }

    // Empirical sup of |f(x)| e^{m d(0,x)} over a deterministic
    // low-discrepancy (Halton) sample of the half-space, heights
    // log-uniform in [e^{-8}, e^{8}].  Cached per rounded m.
    // Throws if m exceeds the declared decay order, or on overflow.
    double certificate(double m, int budget = 2048) const;

    // Pullback f . chain (evaluate f at apply_isometry(chain, p)).
    DecayFunction pullback(const IsometryChain& chain) const;

    static DecayFunction zero(int dim);

private:
    int dim_;
    double decay_order_;
    Eval eval_;

    struct Cache {
        std::mutex mu;
        std::map<long long, double> sup;  // key: round(m * 1e6), budget folded in
    };
    std::shared_ptr<Cache> cache_;
};

}  // namespace horoct
