#include "horoct/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace horoct {

namespace {

// Van der Corput radical inverse in the given prime base.
double radical_inverse(unsigned long long i, unsigned base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i) {
        x += (i % base) * f;
        i /= base;
        f *= inv;
    }
    return x;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

DecayFunction::DecayFunction(int dim, double decay_order, Eval eval)
    : dim_(dim), decay_order_(decay_order), eval_(std::move(eval)), cache_(std::make_shared<Cache>()) {
    if (dim_ < 2 || dim_ > 8) throw std::invalid_argument("DecayFunction: dim must be in [2, 8]");
    if (!(decay_order_ > 0.0)) throw std::invalid_argument("DecayFunction: decay_order must be > 0");
    if (!eval_) throw std::invalid_argument("DecayFunction: evaluator required");
}

DecayFunction DecayFunction::zero(int dim) {
    return DecayFunction(dim, 1e6, [](const PointH&) { return 0.0; });
}

double DecayFunction::certificate(double m, int budget) const {
    if (!(m > 0.0) || m > decay_order_ + 1e-12)
        throw std::invalid_argument("certificate: m must lie in (0, decay_order]");
    if (budget < 1) throw std::invalid_argument("certificate: budget must be positive");

    const long long key = llround(m * 1e6) * 1000003LL + budget;
    {
        std::scoped_lock lock(cache_->mu);
        auto it = cache_->sup.find(key);
        if (it != cache_->sup.end()) return it->second;
    }

    const PointH o = PointH::origin(dim_);
    const int nh = dim_ - 1;
    double sup = 0.0;
    for (int i = 1; i <= budget; ++i) {
        // Height log-uniform in [e^{-8}, e^{8}]; horizontal coordinates
        // Cauchy-mapped to cover the whole slab.
        Vec x(static_cast<size_t>(nh));
        for (int k = 0; k < nh; ++k) {
            const double u = radical_inverse(static_cast<unsigned long long>(i), kPrimes[k + 1]);
            x[static_cast<size_t>(k)] = std::tan(std::numbers::pi * (u - 0.5));
        }
        const double h = std::exp(16.0 * (radical_inverse(static_cast<unsigned long long>(i), kPrimes[0]) - 0.5));
        const PointH p(std::move(x), h);
        const double fv = std::abs(eval_(p));
        if (std::isnan(fv)) throw std::runtime_error("certificate: NaN from field at sample " + std::to_string(i));
        if (fv == 0.0) continue;
        const double logv = std::log(fv) + m * distance(o, p);
        if (logv > 700.0)
            throw std::runtime_error("certificate: overflow of |f| e^{m d} at sample height " + std::to_string(h));
        sup = std::max(sup, std::exp(logv));
    }

    std::scoped_lock lock(cache_->mu);
    cache_->sup[key] = sup;
    return sup;
}

DecayFunction DecayFunction::pullback(const IsometryChain& chain) const {
    Eval base = eval_;
    return DecayFunction(dim_, decay_order_, [base, chain](const PointH& p) {
        return base(apply_isometry(chain, p));
    });
}

}  // namespace horoct
