#include "integrator.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "normkam/errors.hpp"

namespace normkam::detail {

namespace odeint = boost::numeric::odeint;

IntegrationResult integrate(const Rhs2& rhs, State2 y, double x0, double x1, const StepControl& ctl,
                            const Observer2& observer)
{
    odeint::bulirsch_stoer<State2> stepper(ctl.abs_tol, ctl.rel_tol);
    auto sys = [&rhs](const State2& s, State2& d, double x) { rhs(s, d, x); };

    IntegrationResult res{y, x0, 0, false};
    const double dir = x1 >= x0 ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(ctl.initial_step), std::abs(x1 - x0));
    double x = x0;
    while (dir * (x1 - x) > 0.0) {
        const double remaining = x1 - x;
        const bool last = std::abs(h) >= std::abs(remaining);
        if (last) {
            h = remaining;
        }
        const double before = x;
        const auto outcome = stepper.try_step(sys, y, x, h);
        if (outcome == odeint::fail) {
            if (std::abs(h) < ctl.min_step) {
                throw StepUnderflow("integrate: step size fell below " + std::to_string(ctl.min_step) + " at x = " +
                                    std::to_string(x));
            }
            continue;
        }
        if (last) {
            x = x1;  // land exactly on the endpoint
        }
        ++res.steps;
        if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
            throw StepUnderflow("integrate: solution became non-finite at x = " + std::to_string(before));
        }
        if (observer && !observer(x, y)) {
            res.stopped = true;
            break;
        }
    }
    res.state = y;
    res.x = x;
    return res;
}

}  // namespace normkam::detail
