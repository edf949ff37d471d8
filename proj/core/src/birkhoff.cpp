#include <algorithm>
#include <cmath>
#include <limits>

#include "layout.hpp"
#include "normkam/errors.hpp"
#include "normkam/homological.hpp"
#include "normkam/normalform.hpp"

namespace normkam {

namespace {

double mean_of(const Series& order0)
{
    return order0.raw()[order0.layout().zero_mode()].real();
}

struct Stage {
    NearIdentityTransform forward;
    NearIdentityTransform inverse;
};

}  // namespace

BirkhoffResult birkhoff_reduce(const ReversibleCylinderMap& m, int n, const DiophantineParams& dioph,
                               const BirkhoffOptions& opt)
{
    if (n < 1 || n > m.f.order_max()) {
        throw std::invalid_argument("birkhoff_reduce: target order must lie in [1, order_max]");
    }
    const double min_div = opt.min_divisor > 0.0 ? opt.min_divisor : default_min_divisor(dioph);
    const double inf = std::numeric_limits<double>::infinity();
    auto odd = [&](const Series& s) { return opt.symmetrize_generators ? odd_part(s) : s; };
    auto even = [&](const Series& s) { return opt.symmetrize_generators ? even_part(s) : s; };

    BirkhoffResult res{m, {}, NearIdentityTransform::identity(m.f), {}, std::nullopt};
    const Series zero = Series::zero_like(m.f);

    auto apply = [&](const Stage& st) {
        res.map = conjugate(res.map, st.forward, st.inverse);
        res.transform = compose_transforms(res.transform, st.forward);
    };

    for (int k = 1; k < n; ++k) {
        // Radial stage.
        const Series psi = coefficient_function(res.map.g, k);
        if (k == 1) {
            const Series log_mult = apply_pointwise(psi, [](double x) {
                if (!(1.0 + x > 0.0)) {
                    throw NonPositiveMultiplier("birkhoff_reduce: order-1 radial multiplier is not positive");
                }
                return std::log1p(x);
            });
            const Series log_c = even(solve_difference(project_zero_mean(log_mult), res.map.gamma0, min_div, inf));
            const Series c = apply_pointwise(log_c, [](double x) { return std::expm1(x); });
            const Series c_inv = apply_pointwise(log_c, [](double x) { return std::expm1(-x); });
            res.stages.push_back({k, "radial", mean_of(log_mult), coefficient_norm(log_c)});
            if (!log_c.is_zero()) {
                apply({{zero, multiply_by_r_power(c, 1)}, {zero, multiply_by_r_power(c_inv, 1)}});
            }
        } else {
            const Series w = even(solve_difference(project_zero_mean(psi), res.map.gamma0, min_div, inf));
            res.stages.push_back({k, "radial", mean_of(psi), coefficient_norm(w)});
            if (!w.is_zero()) {
                const NearIdentityTransform fwd{zero, multiply_by_r_power(w, k)};
                apply({fwd, invert_transform(fwd)});
            }
        }

        // Angular stage.
        const Series phi = coefficient_function(res.map.f, k);
        const double gamma = mean_of(phi);
        res.gammas.push_back(gamma);
        const Series a = odd(solve_difference(project_zero_mean(phi), res.map.gamma0, min_div, inf));
        res.stages.push_back({k, "angular", gamma, coefficient_norm(a)});
        if (!a.is_zero()) {
            const NearIdentityTransform fwd{multiply_by_r_power(a, k), zero};
            apply({fwd, invert_transform(fwd)});
        }
    }

    // Residual beyond the Birkhoff polynomial; roundoff left below order n is
    // reported and removed.
    std::vector<SeriesEntry> poly;
    for (std::size_t i = 0; i < res.gammas.size(); ++i) {
        poly.push_back({static_cast<int>(i) + 1, std::vector<int>(static_cast<std::size_t>(m.f.dim()), 0),
                        Complex{res.gammas[i], 0.0}});
    }
    const Series twist = make_series({m.f.freq().begin(), m.f.freq().end()}, poly, m.f.order_max(), m.f.cutoff());
    const Series rest = res.map.f - twist;
    res.leftover = std::max(max_abs_coeff(rest, 0, n - 1), max_abs_coeff(res.map.g, 0, n - 1));
    const double scale = coefficient_norm(m.f) + coefficient_norm(m.g);
    if (res.leftover <= opt.cleanup_tol * scale) {
        res.map.f = twist + truncate_orders(rest, n, m.f.order_max());
        res.map.g = truncate_orders(res.map.g, n, m.f.order_max());
    }
    res.residual_order = ReversibleCylinderMap{m.gamma0, res.map.f - twist, res.map.g}.residual_order();
    return res;
}

}  // namespace normkam
