#include "normkam/oscillator.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "integrator.hpp"
#include "normkam/errors.hpp"

namespace normkam {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Adaptive Gauss-Kronrod over [a, b], split at multiples of pi/2 where the
// integrands of this module switch branches.
template <class F>
double quad(F&& fn, double a, double b, double tol)
{
    if (a == b) {
        return 0.0;
    }
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double quarter = std::numbers::pi / 2.0;
    double total = 0.0;
    double x = lo;
    while (x < hi) {
        double next = (std::floor(x / quarter + 1e-12) + 1.0) * quarter;
        next = std::min(next, hi);
        if (next > x) {
            total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, x, next, 20, tol);
        }
        x = next;
    }
    return sign * total;
}

double eval_number(const ConfigFile& cfg, const std::string& key, std::optional<double> fallback)
{
    if (cfg.has(key)) {
        try {
            return cfg.number(key);
        } catch (const ParseError&) {
            return Expression::parse(cfg.string(key))(0.0);
        }
    }
    if (fallback) {
        return *fallback;
    }
    throw InvalidProblem(cfg.origin() + ": missing key '" + key + "'");
}

}  // namespace

double TrigPolynomial::operator()(double t) const
{
    double s = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
        s += a[l] * std::cos(static_cast<double>(l) * t);
    }
    for (std::size_t l = 0; l < b.size(); ++l) {
        s += b[l] * std::sin(static_cast<double>(l) * t);
    }
    return s;
}

int TrigPolynomial::degree() const
{
    int d = 0;
    for (std::size_t l = 0; l < std::max(a.size(), b.size()); ++l) {
        const double al = l < a.size() ? a[l] : 0.0;
        const double bl = l < b.size() ? b[l] : 0.0;
        if (al != 0.0 || bl != 0.0) {
            d = static_cast<int>(l);
        }
    }
    return d;
}

std::complex<double> TrigPolynomial::coeff(int l) const
{
    const auto m = static_cast<std::size_t>(std::abs(l));
    const double al = m < a.size() ? a[m] : 0.0;
    const double bl = m < b.size() ? b[m] : 0.0;
    if (l == 0) {
        return {al, 0.0};
    }
    // a cos + b sin = (a - i b)/2 e^{i l t} + (a + i b)/2 e^{-i l t}
    return l > 0 ? std::complex<double>{al / 2.0, -bl / 2.0} : std::complex<double>{al / 2.0, bl / 2.0};
}

bool TrigPolynomial::is_zero() const
{
    return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; }) &&
           std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
}

TrigPolynomial TrigPolynomial::truncated(int d) const
{
    TrigPolynomial out = *this;
    const auto n = static_cast<std::size_t>(std::max(d, 0)) + 1;
    if (out.a.size() > n) {
        out.a.resize(n);
    }
    if (out.b.size() > n) {
        out.b.resize(n);
    }
    return out;
}

TrigPolynomial TrigPolynomial::from_expression(const Expression& p, int samples)
{
    const int n = samples;
    std::vector<double> values(static_cast<std::size_t>(n));
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(i)] = p(two_pi * i / n);
        scale = std::max(scale, std::abs(values[static_cast<std::size_t>(i)]));
    }
    TrigPolynomial tp;
    const int top = n / 2 - 1;
    tp.a.assign(static_cast<std::size_t>(top) + 1, 0.0);
    tp.b.assign(static_cast<std::size_t>(top) + 1, 0.0);
    for (int l = 0; l <= top; ++l) {
        double ca = 0.0;
        double cb = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = two_pi * i / n;
            ca += values[static_cast<std::size_t>(i)] * std::cos(l * t);
            cb += values[static_cast<std::size_t>(i)] * std::sin(l * t);
        }
        const double w = l == 0 ? 1.0 / n : 2.0 / n;
        ca *= w;
        cb *= w;
        tp.a[static_cast<std::size_t>(l)] = std::abs(ca) > 1e-14 * std::max(scale, 1.0) ? ca : 0.0;
        tp.b[static_cast<std::size_t>(l)] = std::abs(cb) > 1e-14 * std::max(scale, 1.0) ? cb : 0.0;
    }
    tp = tp.truncated(tp.degree());
    for (double t : {0.1234, 0.9876, 2.2222, 3.7, 5.05, 6.1}) {
        if (std::abs(tp(t) - p(t)) > 1e-10 * std::max(scale, 1.0)) {
            throw InvalidProblem("forcing \"" + p.text() + "\" is not a 2pi-periodic trigonometric polynomial of degree < " +
                                 std::to_string(n / 2));
        }
    }
    return tp;
}

void OscillatorProblem::validate() const
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidProblem("omega must be positive");
    }
    for (double v : {0.3, 1.7, 4.2, 13.0, 250.0}) {
        if (std::abs(f(v) - f(-v)) > 1e-12 * (1.0 + std::abs(f(v)))) {
            throw InvalidProblem("f must be even: f(" + std::to_string(v) + ") != f(-" + std::to_string(v) + ")");
        }
    }
    for (double t : {0.3, 1.1, 2.5, 4.0}) {
        if (std::abs(p(t) - p(-t)) > 1e-12 * (1.0 + std::abs(p(t)))) {
            throw InvalidProblem("p must be even in t");
        }
    }
    const double big = 1e6;
    auto check = [](const char* name, double sampled, double declared) {
        if (!(std::abs(sampled - declared) <= 1e-4)) {
            throw InvalidProblem(std::string("declared limit ") + name + " = " + std::to_string(declared) +
                                 " does not match sampled value " + std::to_string(sampled));
        }
    };
    check("phi(+inf)", phi(big), phi_plus);
    check("phi(-inf)", phi(-big), phi_minus);
    check("f(+inf)", f(big), f_plus);
    check("f(-inf)", f(-big), f_plus);
    check("g(+inf)", g(big), g_plus);
    check("g(-inf)", g(-big), g_minus);
}

OscillatorProblem OscillatorProblem::from_config(const ConfigFile& cfg)
{
    OscillatorProblem prob;
    prob.omega = eval_number(cfg, "omega", std::nullopt);
    prob.phi = Expression::parse(cfg.string("phi", "0"));
    prob.f = Expression::parse(cfg.string("f", "0"));
    prob.g = Expression::parse(cfg.string("g", "0"));
    prob.p_source = Expression::parse(cfg.string("p", "0"));
    prob.p = TrigPolynomial::from_expression(prob.p_source);
    prob.phi_plus = eval_number(cfg, "limits.phi_plus", 0.0);
    prob.phi_minus = eval_number(cfg, "limits.phi_minus", 0.0);
    prob.f_plus = eval_number(cfg, "limits.f_plus", 0.0);
    if (cfg.has("limits.f_minus") && eval_number(cfg, "limits.f_minus", 0.0) != prob.f_plus) {
        throw InvalidProblem("f is even, so limits.f_minus must equal limits.f_plus");
    }
    prob.g_plus = eval_number(cfg, "limits.g_plus", 0.0);
    prob.g_minus = eval_number(cfg, "limits.g_minus", 0.0);
    prob.validate();
    return prob;
}

OscillatorProblem OscillatorProblem::make(double omega, const std::string& phi, const std::string& f,
                                          const std::string& g, const std::string& p, double phi_plus,
                                          double phi_minus, double f_plus, double g_plus, double g_minus)
{
    OscillatorProblem prob;
    prob.omega = omega;
    prob.phi = Expression::parse(phi);
    prob.f = Expression::parse(f);
    prob.g = Expression::parse(g);
    prob.p_source = Expression::parse(p);
    prob.p = TrigPolynomial::from_expression(prob.p_source);
    prob.phi_plus = phi_plus;
    prob.phi_minus = phi_minus;
    prob.f_plus = f_plus;
    prob.g_plus = g_plus;
    prob.g_minus = g_minus;
    prob.validate();
    return prob;
}

double OscillatorProblem::forcing(double x, double y, double t) const
{
    double s = g(x) - p(t);
    if (!phi.is_zero_constant() && !f.is_zero_constant()) {
        s += phi(x) * f(omega * y);
    }
    return s / omega;
}

std::array<double, 2> vector_field(const OscillatorProblem& prob, double x, double y, double t)
{
    return {-prob.omega * y, prob.omega * x + prob.forcing(x, y, t)};
}

Trajectory::Trajectory(Rhs rhs, std::vector<double> times, std::vector<State> states)
    : rhs_(std::move(rhs)), times_(std::move(times)), states_(std::move(states))
{
}

Trajectory::State Trajectory::at(double t) const
{
    const bool forward = times_.back() >= times_.front();
    const double lo = std::min(times_.front(), times_.back());
    const double hi = std::max(times_.front(), times_.back());
    if (t < lo || t > hi) {
        throw std::out_of_range("Trajectory::at: time outside the integrated span");
    }
    std::size_t i = 0;
    if (forward) {
        i = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
    } else {
        i = static_cast<std::size_t>(
            std::upper_bound(times_.begin(), times_.end(), t, std::greater<double>()) - times_.begin());
    }
    // Nearest of the bracketing nodes.
    std::size_t best = i == 0 ? 0 : i - 1;
    if (i < times_.size() && std::abs(times_[i] - t) < std::abs(times_[best] - t)) {
        best = i;
    }
    if (times_[best] == t) {
        return states_[best];
    }
    const StepControl fine{1e-13, 1e-13, std::abs(t - times_[best]), 1e-15};
    return detail::integrate(rhs_, states_[best], times_[best], t, fine).state;
}

Trajectory integrate_orbit(const OscillatorProblem& prob, std::array<double, 2> initial, double t0, double t1,
                           const StepControl& ctl)
{
    Trajectory::Rhs rhs = [&prob](const Trajectory::State& s, Trajectory::State& d, double t) {
        d = vector_field(prob, s[0], s[1], t);
    };
    std::vector<double> times{t0};
    std::vector<Trajectory::State> states{initial};
    detail::integrate(rhs, initial, t0, t1, ctl, [&](double t, const detail::State2& s) {
        times.push_back(t);
        states.push_back(s);
        return true;
    });
    // The stored rhs must not dangle once this function returns.
    const OscillatorProblem copy = prob;
    Trajectory::Rhs owned = [copy](const Trajectory::State& s, Trajectory::State& d, double t) {
        d = vector_field(copy, s[0], s[1], t);
    };
    return Trajectory(std::move(owned), std::move(times), std::move(states));
}

PolarState poincare_map(const OscillatorProblem& prob, const PolarState& s, const PoincareOptions& opt)
{
    if (!(s.r > 0.0)) {
        throw AngleMonotonicityLost("poincare_map: radius must be positive");
    }
    const double min_rate = opt.min_rate * prob.omega;
    // State (r, t) as functions of the polar angle.
    detail::Rhs2 rhs = [&](const detail::State2& y, detail::State2& d, double theta) {
        const double c = std::cos(theta);
        const double sn = std::sin(theta);
        const double r = y[0];
        const double force = prob.forcing(r * c, r * sn, y[1]);
        const double rate = prob.omega + force * c / r;
        if (!(rate >= min_rate)) {
            throw AngleMonotonicityLost("poincare_map: angular rate " + std::to_string(rate) + " below " +
                                        std::to_string(min_rate) + " at r = " + std::to_string(r));
        }
        d[0] = force * sn / rate;
        d[1] = 1.0 / rate;
    };
    StepControl ctl = opt.control;
    ctl.initial_step = std::min(ctl.initial_step, 0.1);
    const auto res = detail::integrate(rhs, {s.r, s.t}, s.theta, s.theta + two_pi, ctl);
    return {res.state[0], s.theta + two_pi, res.state[1]};
}

JValues compute_J(const OscillatorProblem& prob, double lambda, double tol)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("compute_J: lambda must be positive");
    }
    JValues j;
    const double w = prob.omega;
    if (!prob.phi.is_zero_constant() && !prob.f.is_zero_constant()) {
        j.j1 = quad(
                   [&](double a) {
                       return prob.phi(lambda * std::cos(a)) * prob.f(w * lambda * std::sin(a)) * std::cos(a);
                   },
                   0.0, two_pi, tol) /
               (two_pi * lambda);
    }
    if (!prob.g.is_zero_constant()) {
        j.j2 = quad([&](double a) { return prob.g(lambda * std::cos(a)) * std::cos(a); }, 0.0, two_pi, tol) /
               (two_pi * lambda);
    }
    return j;
}

AveragingTransforms::AveragingTransforms(const OscillatorProblem& prob, double lambda, double min_divisor)
    : prob_(&prob), lambda_(lambda), j_(compute_J(prob, lambda))
{
    const double w = prob.omega;
    const int deg = prob.p.degree();
    for (int k : {-1, 1}) {
        for (int l = -deg; l <= deg; ++l) {
            const std::complex<double> pl = prob.p.coeff(l);
            if (pl == 0.0) {
                continue;
            }
            const double div = k + l / w;
            if (std::abs(div) < min_divisor) {
                throw SmallDivisor({k, l}, std::abs(div), min_divisor);
            }
            const std::complex<double> value = -std::pow(w, -3.0) * pl * 0.5 / (std::complex<double>{0.0, div});
            modes_.push_back({k, l, value});
        }
    }
}

double AveragingTransforms::s1(double theta, double r) const
{
    const auto& p = *prob_;
    const double w = p.omega;
    const bool damped = !p.phi.is_zero_constant() && !p.f.is_zero_constant();
    return -quad(
               [&](double a) {
                   const double x = r * std::cos(a);
                   double v = p.g(x);
                   if (damped) {
                       v += p.phi(x) * p.f(w * r * std::sin(a));
                   }
                   return v * std::sin(a);
               },
               0.0, theta, 1e-12) /
           (w * w);
}

double AveragingTransforms::s2(double theta) const
{
    const auto& p = *prob_;
    const double w = p.omega;
    const double lam = lambda_;
    const bool damped = !p.phi.is_zero_constant() && !p.f.is_zero_constant();
    const double mean = lam * (j_.j1 + j_.j2);
    return quad(
               [&](double a) {
                   const double x = lam * std::cos(a);
                   double v = p.g(x) * std::cos(a);
                   if (damped) {
                       v += p.phi(x) * p.f(w * lam * std::sin(a)) * std::cos(a);
                   }
                   return v - mean;
               },
               0.0, theta, 1e-12) /
           (w * w * w * lam);
}

double AveragingTransforms::s3(double theta, double tau) const
{
    double s = 0.0;
    for (const auto& m : modes_) {
        s += (m.value * std::polar(1.0, m.k * theta + m.l * tau)).real();
    }
    return s;
}

double AveragingTransforms::s3_theta(double theta, double tau) const
{
    double s = 0.0;
    for (const auto& m : modes_) {
        s += (std::complex<double>{0.0, static_cast<double>(m.k)} * m.value * std::polar(1.0, m.k * theta + m.l * tau))
                 .real();
    }
    return s;
}

double AveragingTransforms::s3_tau(double theta, double tau) const
{
    double s = 0.0;
    for (const auto& m : modes_) {
        s += (std::complex<double>{0.0, static_cast<double>(m.l)} * m.value * std::polar(1.0, m.k * theta + m.l * tau))
                 .real();
    }
    return s;
}

double AveragingTransforms::s3_residual(int n) const
{
    const double w = prob_->omega;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double th = two_pi * i / n;
            const double ta = two_pi * k / n;
            const double r = std::pow(w, -3.0) * prob_->p(ta) * std::cos(th) + s3_theta(th, ta) + s3_tau(th, ta) / w;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

TwistValues analytic_twist(const OscillatorProblem& prob)
{
    const double w = prob.omega;
    return {two_pi / w,
            -2.0 * std::pow(w, -3.0) * ((prob.phi_plus - prob.phi_minus) * prob.f_plus + (prob.g_plus - prob.g_minus))};
}

double rotation_number(const OscillatorProblem& prob, const PolarState& s, int n_iterates, const PoincareOptions& opt)
{
    if (n_iterates < 1) {
        throw std::invalid_argument("rotation_number: need at least one iterate");
    }
    PolarState cur = s;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < n_iterates; ++i) {
        const PolarState next = poincare_map(prob, cur, opt);
        const double x = (i + 0.5) / n_iterates;
        const double w = std::exp(-1.0 / (x * (1.0 - x)));
        num += w * (next.t - cur.t);
        den += w;
        cur = next;
    }
    return num / den / two_pi;
}

BoundednessReport boundedness_probe(const OscillatorProblem& prob, std::array<double, 2> initial, double t_max,
                                    double bound, const StepControl& ctl)
{
    const double w = prob.omega;
    auto norm = [w](const detail::State2& s) { return std::abs(s[0]) + w * std::abs(s[1]); };
    BoundednessReport rep;
    rep.initial_norm = norm(initial);
    rep.sup_norm = rep.initial_norm;
    detail::Rhs2 rhs = [&prob](const detail::State2& s, detail::State2& d, double t) {
        d = vector_field(prob, s[0], s[1], t);
    };
    const auto res = detail::integrate(rhs, initial, 0.0, t_max, ctl, [&](double, const detail::State2& s) {
        rep.sup_norm = std::max(rep.sup_norm, norm(s));
        return rep.sup_norm <= bound;
    });
    rep.escaped = res.stopped;
    rep.t_end = res.x;
    return rep;
}

}  // namespace normkam
