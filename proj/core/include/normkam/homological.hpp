#pragma once

#include "normkam/series.hpp"

namespace normkam {

// Solves u(theta + gamma0, r) - u(theta, r) = h(theta, r) for zero-mean h;
// returns the zero-mean solution u_kj = h_kj / (e^{i<j,omega>gamma0} - 1).
//
// Throws NotInImage if some j = 0 coefficient of h exceeds mean_tol (absolute),
// SmallDivisor if a divisor on the support of h is below min_divisor.
Series solve_difference(const Series& h, double gamma0, double min_divisor, double mean_tol = 0.0);

// Smallest |e^{i<j,omega>gamma0} - 1| over nonzero modes in the box.
double smallest_divisor(const Series& like, double gamma0);

struct SymmetrizedPair {
    Series p;
    Series q;
    // |p(-xi - gamma0) - p| and |q(-xi - gamma0) + q| as strip norms.
    double p_residual = 0.0;
    double q_residual = 0.0;
};

// p = (f + f(-xi - gamma0)) / 2, q = (g - g(-xi - gamma0)) / 2.
SymmetrizedPair symmetrize_parity(const Series& f, const Series& g, double gamma0,
                                  const StripDomain& dom = {});

// h(-theta - gamma0).
Series reflect_about(const Series& h, double gamma0);

enum class Parity { Odd, Even, Unknown };

struct ParityReport {
    // |reflect(u) + u| and |reflect(u) - u| as strip norms.
    double odd_residual = 0.0;
    double even_residual = 0.0;
    // Parity implied by the symmetry of h about -gamma0/2.
    Parity expected = Parity::Unknown;
};

// Checks parity propagation: h(-theta-gamma0) = h gives odd u,
// h(-theta-gamma0) = -h gives even u. Throws ParityViolation when the expected
// parity residual exceeds tol * strip_norm(u) (absolute tol when u = 0).
ParityReport parity_of_solution(const Series& u, const Series& h, double gamma0, double tol = 1e-12,
                                const StripDomain& dom = {});

}  // namespace normkam
