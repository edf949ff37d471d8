#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "layout.hpp"
#include "normkam/errors.hpp"
#include "normkam/homological.hpp"
#include "normkam/normalform.hpp"

namespace normkam {

namespace {

double pair_norm(const Series& a, const Series& b, const StripDomain& dom)
{
    return strip_norm(a, dom) + strip_norm(b, dom);
}

double gradient_norm(const Series& a, const StripDomain& dom)
{
    return strip_norm(derivative_theta(a), dom) + strip_norm(derivative_r(a), dom);
}

}  // namespace

void KamSchedule::validate() const
{
    auto unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!unit(t0) || !unit(rho0) || !unit(d0)) {
        throw std::invalid_argument("KamSchedule: t0, rho0 and d0 must lie in (0, 1)");
    }
    if (alpha < 0 || n_max < 0) {
        throw std::invalid_argument("KamSchedule: alpha and n_max must be nonnegative");
    }
}

double KamSchedule::t(int n) const { return 0.5 * t0 * (1.0 + std::pow(2.0 / 3.0, n)); }

double KamSchedule::rho(int n) const { return 0.5 * rho0 * (1.0 + std::pow(2.0 / 3.0, n)); }

double KamSchedule::d(int n) const
{
    double d = d0;
    for (int i = 0; i < n; ++i) {
        d = std::pow(1.5, i) * std::pow(d, 4.0 / 3.0);
    }
    return d;
}

int KamSchedule::s(int n) const { return (1 << (alpha + n)) + 1; }

std::string to_string(StopReason r)
{
    switch (r) {
    case StopReason::Converged:
        return "converged";
    case StopReason::OrderExhausted:
        return "order_exhausted";
    case StopReason::MaxSteps:
        return "max_steps";
    case StopReason::Obstruction:
        return "obstruction";
    }
    return "unknown";
}

KamStepResult kam_step(const ReversibleCylinderMap& m, int s, const DiophantineParams& dioph, const Tolerances& tol,
                       const StripDomain& dom)
{
    if (s < 2) {
        throw std::invalid_argument("kam_step: residual order must be at least 2");
    }
    if (!m.f.same_layout(m.g)) {
        throw FrequencyMismatch("kam_step: f and g differ in layout");
    }
    StepReport rep;
    rep.order_in = s;
    rep.residual_before = pair_norm(m.f, m.g, dom);
    const auto rev_in = check_reversibility(m, std::numeric_limits<double>::infinity(), dom);
    rep.reversibility_in = rev_in.angular + rev_in.radial;

    const auto order = m.residual_order();
    if (!order) {
        rep.order_out = m.f.order_max() + 1;
        rep.reversibility_out = rep.reversibility_in;
        return {m, NearIdentityTransform::identity(m.f), rep};
    }
    if (*order < s) {
        throw OrderDoublingFailure("kam_step: input has nonzero coefficients at order " + std::to_string(*order) +
                                   " below s = " + std::to_string(s));
    }

    const int n = m.f.order_max();
    const int hi = 2 * s - 2;
    const double scale = coefficient_norm(m.f) + coefficient_norm(m.g);
    const auto sym = symmetrize_parity(m.f, m.g, m.gamma0, dom);
    const Series p = truncate_orders(sym.p, s, hi);
    const Series q = truncate_orders(sym.q, s, hi);

    const auto& lay = m.f.layout();
    rep.mean_norm = coefficient_norm(project_mean(p)) + coefficient_norm(project_mean(q));
    for (int k = s; k <= std::min(hi, n); ++k) {
        const Complex pm = p.raw()[lay.at(k, lay.zero_mode())];
        const Complex qm = q.raw()[lay.at(k, lay.zero_mode())];
        if (std::abs(pm) + std::abs(qm) > tol.mean * scale + tol.floor) {
            throw ObstructionDetected(k, pm.real(), qm.real());
        }
    }

    rep.min_divisor = tol.min_divisor > 0.0 ? tol.min_divisor : default_min_divisor(dioph);
    const double inf = std::numeric_limits<double>::infinity();
    const Series u0 = solve_difference(project_zero_mean(p), m.gamma0, rep.min_divisor, inf);
    const Series v0 = solve_difference(project_zero_mean(q), m.gamma0, rep.min_divisor, inf);

    const double gen = coefficient_norm(u0) + coefficient_norm(v0);
    rep.parity_residual = 0.5 * (coefficient_norm(reflect_angle(u0) + u0) + coefficient_norm(reflect_angle(v0) - v0));
    if (rep.parity_residual > tol.parity * std::max(gen, std::numeric_limits<double>::min())) {
        throw ParityViolation("kam_step: generator parity defect " + std::to_string(rep.parity_residual));
    }
    const Series u = odd_part(u0);
    const Series v = even_part(v0);

    // m o T = T o m' with T = (xi + u, eta + v):
    //   F = u + f(xi + u, eta + v) - u(xi + gamma0 + F, eta + G), G likewise.
    const Series fu = u + compose_map(m.f, u, v);
    const Series gv = v + compose_map(m.g, u, v);
    const Series su = shift_angle(u, m.gamma0);
    const Series sv = shift_angle(v, m.gamma0);
    Series f = Series::zero_like(m.f);
    Series g = Series::zero_like(m.g);
    for (int pass = 1; pass <= n + 2; ++pass) {
        Series nf = fu - compose_map(su, f, g);
        Series ng = gv - compose_map(sv, f, g);
        const double change = coefficient_norm(nf - f) + coefficient_norm(ng - g);
        f = std::move(nf);
        g = std::move(ng);
        rep.conjugacy_passes = pass;
        if (change <= 1e-15 * (coefficient_norm(f) + coefficient_norm(g))) {
            break;
        }
    }

    rep.cleanup_max = std::max(max_abs_coeff(f, 0, hi), max_abs_coeff(g, 0, hi));
    if (rep.cleanup_max > tol.residual * scale + tol.floor) {
        throw OrderDoublingFailure("kam_step: coefficient " + std::to_string(rep.cleanup_max) +
                                   " survives below order " + std::to_string(hi + 1));
    }
    ReversibleCylinderMap out{m.gamma0, truncate_orders(f, hi + 1, n), truncate_orders(g, hi + 1, n)};

    const auto rev = check_reversibility(out, inf, dom);
    rep.reversibility_out = rev.angular + rev.radial;
    rep.order_out = out.residual_order().value_or(n + 1);
    rep.residual_after = pair_norm(out.f, out.g, dom);
    rep.u_norm = strip_norm(u, dom);
    rep.v_norm = strip_norm(v, dom);
    rep.du_norm = gradient_norm(u, dom);
    rep.dv_norm = gradient_norm(v, dom);
    rep.truncation_loss = out.f.truncation_loss() + out.g.truncation_loss();
    return {std::move(out), {u, v}, rep};
}

KamResult kam_iterate(const ReversibleCylinderMap& m, const KamSchedule& schedule, const DiophantineParams& dioph,
                      const Tolerances& tol)
{
    schedule.validate();
    KamResult res{NearIdentityTransform::identity(m.f), m, {}, StopReason::MaxSteps, std::nullopt, {}};
    const int n_order = m.f.order_max();
    res.decay.push_back(pair_norm(m.f, m.g, schedule.domain(0)));
    bool exhausted = false;

    for (int n = 0;; ++n) {
        const auto order = res.map.residual_order();
        if (!order) {
            res.stop = exhausted ? StopReason::OrderExhausted : StopReason::Converged;
            break;
        }
        if (n >= schedule.n_max) {
            res.stop = StopReason::MaxSteps;
            break;
        }
        const int s = *order;
        try {
            auto step = kam_step(res.map, s, dioph, tol, schedule.domain(n));
            step.report.step = n;
            step.report.d_reference = schedule.d(n + 1);
            // Norms on the shrunken domain of the next stage.
            step.report.residual_after = pair_norm(step.map.f, step.map.g, schedule.domain(n + 1));
            res.decay.push_back(step.report.residual_after);
            res.transform = compose_transforms(res.transform, step.transform);
            res.map = std::move(step.map);
            res.reports.push_back(step.report);
            exhausted = 2 * s - 1 > n_order;
        } catch (const ObstructionDetected& e) {
            res.obstruction = ObstructionInfo{n, e.order(), e.value(), e.radial_value()};
            res.stop = StopReason::Obstruction;
            break;
        }
    }
    return res;
}

std::optional<double> fit_decay_exponent(const std::vector<double>& decay)
{
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i + 1 < decay.size(); ++i) {
        if (decay[i] > 0.0 && decay[i + 1] > 0.0) {
            pts.emplace_back(std::log(decay[i]), std::log(decay[i + 1]));
        }
    }
    if (pts.size() < 2) {
        return std::nullopt;
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        return std::nullopt;
    }
    return sxy / sxx;
}

}  // namespace normkam
