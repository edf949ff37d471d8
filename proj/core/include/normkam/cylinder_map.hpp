#pragma once

#include <utility>

#include "normkam/series.hpp"

namespace normkam {

// (theta, r) -> (theta + gamma0 + f(theta, r), r + g(theta, r)).
struct ReversibleCylinderMap {
    double gamma0 = 0.0;
    Series f;
    Series g;

    // Min of order_min(f), order_min(g); empty when both vanish.
    std::optional<int> residual_order() const;
    std::pair<double, double> operator()(double theta, double r) const;
};

// (xi, eta) -> (xi + u(xi, eta), eta + v(xi, eta)).
struct NearIdentityTransform {
    Series u;
    Series v;

    static NearIdentityTransform identity(const Series& like);
    std::pair<double, double> operator()(double xi, double eta) const;
};

struct ReversibilityReport {
    // Strip norms of the two components of M o G o M - G, G(theta, r) = (-theta, r).
    double angular = 0.0;
    double radial = 0.0;
    bool passes = true;
};

// Components of M o G o M - G as series.
std::pair<Series, Series> reversibility_residual(const ReversibleCylinderMap& m);
ReversibilityReport check_reversibility(const ReversibleCylinderMap& m, double tol, const StripDomain& dom = {});

// |reflect(u) + u| and |reflect(v) - v|; both vanish iff the transform commutes with G.
std::pair<double, double> involution_defect(const NearIdentityTransform& t, const StripDomain& dom = {});

// (outer o inner)(xi, eta).
NearIdentityTransform compose_transforms(const NearIdentityTransform& outer, const NearIdentityTransform& inner);

// Inverse by fixed-point substitution; exact to the truncation order when
// u, v start at order >= 2 or the transform only moves one coordinate with an
// order-raising generator. Throws ConvergenceFailure otherwise.
NearIdentityTransform invert_transform(const NearIdentityTransform& t);

// inverse o m o t, where `inverse` is the inverse of t.
ReversibleCylinderMap conjugate(const ReversibleCylinderMap& m, const NearIdentityTransform& t,
                                const NearIdentityTransform& inverse);

}  // namespace normkam
