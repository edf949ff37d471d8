#include <cmath>
#include <stdexcept>

#include "normkam/normalform.hpp"

namespace normkam {

namespace {

Series generator_series(const SyntheticSpec& spec, bool angular)
{
    const int m = static_cast<int>(spec.freq.size());
    auto mode = [m](int first) {
        std::vector<int> j(static_cast<std::size_t>(m), 0);
        j[0] = first;
        return j;
    };
    // Coefficients decay like 2^{-(k-s)} in the order k so that every order up
    // to order_max carries content: angle eps (sin xi + 0.5 sin 2xi) and radius
    // eps (cos xi + 0.4 cos 2xi + 0.25), times sum_k 2^{-(k-s)} eta^k.
    const Complex half_i{0.0, 0.5};
    std::vector<SeriesEntry> e;
    for (int k = spec.order; k <= spec.order_max; ++k) {
        const double c = spec.eps * std::ldexp(1.0, spec.order - k);
        if (angular) {
            e.push_back({k, mode(1), -half_i * c});
            e.push_back({k, mode(-1), half_i * c});
            e.push_back({k, mode(2), -half_i * 0.5 * c});
            e.push_back({k, mode(-2), half_i * 0.5 * c});
        } else {
            e.push_back({k, mode(1), Complex{0.5 * c, 0.0}});
            e.push_back({k, mode(-1), Complex{0.5 * c, 0.0}});
            e.push_back({k, mode(2), Complex{0.2 * c, 0.0}});
            e.push_back({k, mode(-2), Complex{0.2 * c, 0.0}});
            e.push_back({k, mode(0), Complex{0.25 * c, 0.0}});
        }
    }
    return make_series(spec.freq, e, spec.order_max, spec.cutoff);
}

ReversibleCylinderMap conjugate_normal_form(const SyntheticSpec& spec, const ReversibleCylinderMap& normal)
{
    const NearIdentityTransform v = synthetic_generator(spec);
    return conjugate(normal, invert_transform(v), v);
}

}  // namespace

NearIdentityTransform synthetic_generator(const SyntheticSpec& spec)
{
    if (spec.order < 2) {
        throw std::invalid_argument("synthetic_generator: order must be at least 2");
    }
    return {generator_series(spec, true), generator_series(spec, false)};
}

ReversibleCylinderMap make_linearizable_map(const SyntheticSpec& spec)
{
    const Series zero = Series::zero(spec.freq, spec.order_max, spec.cutoff);
    return conjugate_normal_form(spec, {spec.gamma0, zero, zero});
}

ReversibleCylinderMap make_obstructed_map(const SyntheticSpec& spec, double delta, int twist_order)
{
    const Series zero = Series::zero(spec.freq, spec.order_max, spec.cutoff);
    const SeriesEntry twist{twist_order, std::vector<int>(spec.freq.size(), 0), Complex{delta, 0.0}};
    const Series f = make_series(spec.freq, {twist}, spec.order_max, spec.cutoff);
    return conjugate_normal_form(spec, {spec.gamma0, f, zero});
}

}  // namespace normkam
