#include "normkam/homological.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "layout.hpp"
#include "normkam/errors.hpp"

namespace normkam {

Series solve_difference(const Series& h, double gamma0, double min_divisor, double mean_tol)
{
    const auto& lay = h.layout();
    const auto src = h.raw();
    for (int k = 0; k <= lay.order_max; ++k) {
        const double mean = std::abs(src[lay.at(k, lay.zero_mode())]);
        if (mean > mean_tol) {
            throw NotInImage("solve_difference: right-hand side has theta-mean " + std::to_string(mean) +
                             " at order " + std::to_string(k));
        }
    }
    std::vector<Complex> out(lay.size());
    std::vector<Complex> divisor(lay.modes);
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        divisor[idx] = std::polar(1.0, lay.dot[idx] * gamma0) - 1.0;
    }
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            const Complex c = src[lay.at(k, idx)];
            if (idx == lay.zero_mode() || c == Complex{}) {
                continue;
            }
            const double d = std::abs(divisor[idx]);
            if (d < min_divisor) {
                throw SmallDivisor(h.mode(idx), d, min_divisor);
            }
            out[lay.at(k, idx)] = c / divisor[idx];
        }
    }
    return Series(h.layout_ptr(), std::move(out), h.truncation_loss());
}

double smallest_divisor(const Series& like, double gamma0)
{
    const auto& lay = like.layout();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        if (idx != lay.zero_mode()) {
            m = std::min(m, std::abs(std::polar(1.0, lay.dot[idx] * gamma0) - 1.0));
        }
    }
    return m;
}

Series reflect_about(const Series& h, double gamma0)
{
    return shift_angle(reflect_angle(h), gamma0);
}

SymmetrizedPair symmetrize_parity(const Series& f, const Series& g, double gamma0, const StripDomain& dom)
{
    Series p = 0.5 * (f + reflect_about(f, gamma0));
    Series q = 0.5 * (g - reflect_about(g, gamma0));
    const double pr = strip_norm(reflect_about(p, gamma0) - p, dom);
    const double qr = strip_norm(reflect_about(q, gamma0) + q, dom);
    return {std::move(p), std::move(q), pr, qr};
}

ParityReport parity_of_solution(const Series& u, const Series& h, double gamma0, double tol,
                                const StripDomain& dom)
{
    ParityReport rep;
    const Series ru = reflect_angle(u);
    rep.odd_residual = strip_norm(ru + u, dom);
    rep.even_residual = strip_norm(ru - u, dom);

    const Series rh = reflect_about(h, gamma0);
    const double hn = strip_norm(h, dom);
    const double sym = strip_norm(rh - h, dom);
    const double anti = strip_norm(rh + h, dom);
    const double cut = tol * std::max(hn, 1.0);
    if (sym <= cut) {
        rep.expected = Parity::Odd;
    } else if (anti <= cut) {
        rep.expected = Parity::Even;
    }
    const double bound = tol * std::max(strip_norm(u, dom), 1.0);
    if (rep.expected == Parity::Odd && rep.odd_residual > bound) {
        throw ParityViolation("parity_of_solution: expected odd solution, residual " +
                              std::to_string(rep.odd_residual));
    }
    if (rep.expected == Parity::Even && rep.even_residual > bound) {
        throw ParityViolation("parity_of_solution: expected even solution, residual " +
                              std::to_string(rep.even_residual));
    }
    return rep;
}

}  // namespace normkam
