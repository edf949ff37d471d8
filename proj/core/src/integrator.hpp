#pragma once

#include <array>
#include <functional>

#include "normkam/oscillator.hpp"

namespace normkam::detail {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<void(const State2&, State2&, double)>;
// Called after every accepted step; returning false stops the integration.
using Observer2 = std::function<bool(double, const State2&)>;

struct IntegrationResult {
    State2 state;
    double x = 0.0;
    long steps = 0;
    bool stopped = false;
};

// Adaptive Bulirsch-Stoer extrapolation from x0 to x1, landing exactly on x1.
// Throws StepUnderflow if the step falls below ctl.min_step.
IntegrationResult integrate(const Rhs2& rhs, State2 y, double x0, double x1, const StepControl& ctl,
                            const Observer2& observer = {});

}  // namespace normkam::detail
