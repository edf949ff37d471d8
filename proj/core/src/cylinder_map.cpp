#include "normkam/cylinder_map.hpp"

#include <algorithm>

#include "normkam/errors.hpp"
#include "normkam/homological.hpp"

namespace normkam {

namespace {

std::optional<int> min_order(const Series& a, const Series& b)
{
    const auto oa = a.order_min();
    const auto ob = b.order_min();
    if (!oa) {
        return ob;
    }
    if (!ob) {
        return oa;
    }
    return std::min(*oa, *ob);
}

bool identical(const Series& a, const Series& b)
{
    const auto x = a.raw();
    const auto y = b.raw();
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

}  // namespace

std::optional<int> ReversibleCylinderMap::residual_order() const
{
    return min_order(f, g);
}

std::pair<double, double> ReversibleCylinderMap::operator()(double theta, double r) const
{
    return {theta + gamma0 + f.evaluate(theta, r), r + g.evaluate(theta, r)};
}

NearIdentityTransform NearIdentityTransform::identity(const Series& like)
{
    return {Series::zero_like(like), Series::zero_like(like)};
}

std::pair<double, double> NearIdentityTransform::operator()(double xi, double eta) const
{
    return {xi + u.evaluate(xi, eta), eta + v.evaluate(xi, eta)};
}

std::pair<Series, Series> reversibility_residual(const ReversibleCylinderMap& m)
{
    // M o G o M (theta, r) = (-theta1 + gamma0 + f(-theta1, r1), r1 + g(-theta1, r1))
    // with theta1 = theta + gamma0 + f, r1 = r + g.
    Series angular = compose_map(reflect_about(m.f, m.gamma0), m.f, m.g) - m.f;
    Series radial = compose_map(reflect_about(m.g, m.gamma0), m.f, m.g) + m.g;
    return {std::move(angular), std::move(radial)};
}

ReversibilityReport check_reversibility(const ReversibleCylinderMap& m, double tol, const StripDomain& dom)
{
    const auto [a, b] = reversibility_residual(m);
    ReversibilityReport rep;
    rep.angular = strip_norm(a, dom);
    rep.radial = strip_norm(b, dom);
    rep.passes = rep.angular <= tol && rep.radial <= tol;
    return rep;
}

std::pair<double, double> involution_defect(const NearIdentityTransform& t, const StripDomain& dom)
{
    return {strip_norm(reflect_angle(t.u) + t.u, dom), strip_norm(reflect_angle(t.v) - t.v, dom)};
}

NearIdentityTransform compose_transforms(const NearIdentityTransform& outer, const NearIdentityTransform& inner)
{
    return {inner.u + compose_map(outer.u, inner.u, inner.v), inner.v + compose_map(outer.v, inner.u, inner.v)};
}

NearIdentityTransform invert_transform(const NearIdentityTransform& t)
{
    // A = -u(x + A, y + B), B = -v(x + A, y + B).
    Series a = Series::zero_like(t.u);
    Series b = Series::zero_like(t.v);
    const int passes = t.u.order_max() + 2;
    for (int i = 0; i < passes; ++i) {
        Series na = -compose_map(t.u, a, b);
        Series nb = -compose_map(t.v, a, b);
        const bool done = identical(na, a) && identical(nb, b);
        a = std::move(na);
        b = std::move(nb);
        if (done) {
            return {std::move(a), std::move(b)};
        }
    }
    // Order-raising iterations settle within order_max + 1 passes up to
    // rounding; accept a final change at roundoff level.
    Series na = -compose_map(t.u, a, b);
    Series nb = -compose_map(t.v, a, b);
    const double change = coefficient_norm(na - a) + coefficient_norm(nb - b);
    const double size = coefficient_norm(a) + coefficient_norm(b);
    if (change > 1e-13 * std::max(size, 1e-300)) {
        throw ConvergenceFailure("invert_transform: substitution did not settle (change " + std::to_string(change) +
                                 ")");
    }
    return {std::move(na), std::move(nb)};
}

ReversibleCylinderMap conjugate(const ReversibleCylinderMap& m, const NearIdentityTransform& t,
                                const NearIdentityTransform& inverse)
{
    // m o t = (xi + gamma0 + F1, eta + G1)
    Series f1 = t.u + compose_map(m.f, t.u, t.v);
    Series g1 = t.v + compose_map(m.g, t.u, t.v);
    Series f = f1 + compose_map(shift_angle(inverse.u, m.gamma0), f1, g1);
    Series g = g1 + compose_map(shift_angle(inverse.v, m.gamma0), f1, g1);
    return {m.gamma0, std::move(f), std::move(g)};
}

}  // namespace normkam
