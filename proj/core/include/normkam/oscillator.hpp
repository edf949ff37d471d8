#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "normkam/config_file.hpp"
#include "normkam/expression.hpp"

namespace normkam {

// p(t) = sum_l a_l cos(l t) + b_l sin(l t), l = 0..degree.
struct TrigPolynomial {
    std::vector<double> a;
    std::vector<double> b;

    double operator()(double t) const;
    int degree() const;
    // Complex coefficient of e^{i l t}, |l| <= degree.
    std::complex<double> coeff(int l) const;
    bool is_zero() const;
    // Keeps harmonics up to `degree` (used for truncation-stability checks).
    TrigPolynomial truncated(int degree) const;

    // Samples the expression on a 64-point grid and verifies the
    // reconstruction off-grid; throws InvalidProblem if it does not match.
    static TrigPolynomial from_expression(const Expression& p, int samples = 64);
};

// x'' + phi(x) f(x') + omega^2 x + g(x) = p(t), written with x' = -omega y.
struct OscillatorProblem {
    double omega = 1.0;
    Expression phi;
    Expression f;
    Expression g;
    Expression p_source;
    TrigPolynomial p;

    // Declared limits phi(+-inf), f(+inf) (= f(-inf)), g(+-inf).
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double f_plus = 0.0;
    double g_plus = 0.0;
    double g_minus = 0.0;

    // Checks omega > 0, f and p even, and the declared limits against samples
    // at |x| = 1e6 (tolerance 1e-4). Throws InvalidProblem.
    void validate() const;

    // Keys: omega, phi, f, g, p (expression strings; omega and limits may be
    // numbers or constant expressions) and [limits] phi_plus, phi_minus,
    // f_plus, f_minus (optional, must equal f_plus), g_plus, g_minus.
    static OscillatorProblem from_config(const ConfigFile& cfg);
    static OscillatorProblem make(double omega, const std::string& phi, const std::string& f,
                                  const std::string& g, const std::string& p, double phi_plus = 0.0,
                                  double phi_minus = 0.0, double f_plus = 0.0, double g_plus = 0.0,
                                  double g_minus = 0.0);

    // omega^{-1} (phi(x) f(omega y) + g(x) - p(t))
    double forcing(double x, double y, double t) const;
};

// (x', y') = (-omega y, omega x + forcing(x, y, t)).
std::array<double, 2> vector_field(const OscillatorProblem& prob, double x, double y, double t);

struct StepControl {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double initial_step = 1e-2;
    double min_step = 1e-13;
};

// Accepted steps of an orbit with dense evaluation in between.
class Trajectory {
public:
    using State = std::array<double, 2>;
    using Rhs = std::function<void(const State&, State&, double)>;

    Trajectory(Rhs rhs, std::vector<double> times, std::vector<State> states);

    const std::vector<double>& times() const { return times_; }
    const std::vector<State>& states() const { return states_; }
    State front() const { return states_.front(); }
    State back() const { return states_.back(); }
    // State at t inside the covered span, re-integrated from the nearest node.
    State at(double t) const;

private:
    Rhs rhs_;
    std::vector<double> times_;
    std::vector<State> states_;
};

// Integrates (x, y) from t0 to t1 (either direction). Throws StepUnderflow.
Trajectory integrate_orbit(const OscillatorProblem& prob, std::array<double, 2> initial, double t0, double t1,
                           const StepControl& ctl = {});

struct PolarState {
    double r = 1.0;
    double theta = 0.0;
    double t = 0.0;
};

struct PoincareOptions {
    StepControl control{1e-12, 1e-12, 1e-2, 1e-13};
    // Smallest admissible angular rate, as a fraction of omega.
    double min_rate = 0.5;
};

// Follows the orbit until the polar angle of (x, y) has advanced by exactly
// 2 pi, taking theta as the independent variable. Throws AngleMonotonicityLost
// when theta' drops below min_rate * omega.
PolarState poincare_map(const OscillatorProblem& prob, const PolarState& s, const PoincareOptions& opt = {});

struct JValues {
    double j1 = 0.0;
    double j2 = 0.0;
};

// J1 = 1/(2 pi lambda) int phi(lambda cos) f(omega lambda sin) cos, J2 likewise with g.
JValues compute_J(const OscillatorProblem& prob, double lambda, double tol = 1e-12);

struct S3Mode {
    int k = 0;
    int l = 0;
    std::complex<double> value;
};

// The three averaging transforms at a fixed level lambda.
class AveragingTransforms {
public:
    AveragingTransforms(const OscillatorProblem& prob, double lambda, double min_divisor = 1e-8);

    double lambda() const { return lambda_; }
    // -omega^{-2} int_0^theta (phi(r cos) f(omega r sin) + g(r cos)) sin
    double s1(double theta, double r) const;
    // omega^{-3} lambda^{-1} int_0^theta (phi f cos - lambda J1) + (g cos - lambda J2)
    double s2(double theta) const;
    // Spectral solution of omega^{-3} p(tau) cos(theta) + dS3/dtheta + omega^{-1} dS3/dtau = 0.
    double s3(double theta, double tau) const;
    double s3_theta(double theta, double tau) const;
    double s3_tau(double theta, double tau) const;
    const std::vector<S3Mode>& s3_modes() const { return modes_; }
    const JValues& j() const { return j_; }

    // Sup over an n x n grid of |omega^{-3} p cos + dS3/dtheta + omega^{-1} dS3/dtau|.
    double s3_residual(int n) const;

private:
    const OscillatorProblem* prob_;
    double lambda_;
    JValues j_;
    std::vector<S3Mode> modes_;
};

struct TwistValues {
    double gamma0 = 0.0;
    double gamma1 = 0.0;
};

// gamma0 = 2 pi / omega, gamma1 = -2 omega^{-3} ((phi+ - phi-) f+ + (g+ - g-)).
TwistValues analytic_twist(const OscillatorProblem& prob);

struct TwistSample {
    double lambda = 0.0;
    double phase = 0.0;
    double t_advance = 0.0;
    double r_return = 0.0;
    // Advance of sigma = tau + lambda^{-1} S3(0, tau) over one return.
    double sigma_advance = 0.0;
};

struct TwistFitOptions {
    std::vector<double> lambdas;
    int phases = 8;
    // Regress raw t-advances instead of the transformed ones.
    bool raw = false;
    PoincareOptions poincare{};
};

struct TwistFitReport {
    double gamma0_hat = 0.0;
    double gamma1_hat = 0.0;
    // Residuals of the regression, one per lambda.
    std::vector<double> residuals;
    double residual_rms = 0.0;
    std::vector<TwistSample> samples;
};

// lambda_min:lambda_max:step grid (inclusive of lambda_max when on the grid).
std::vector<double> lambda_grid(double lo, double hi, double step);

// Regresses the phase-averaged advance against 1/lambda. Throws
// FitIllConditioned for fewer than 3 levels or lambda_max / lambda_min < 1.5.
TwistFitReport fit_twist(const OscillatorProblem& prob, const TwistFitOptions& opt);

// Weighted Birkhoff average of t-advances over n returns, divided by 2 pi.
double rotation_number(const OscillatorProblem& prob, const PolarState& s, int n_iterates,
                       const PoincareOptions& opt = {});

struct BoundednessReport {
    double initial_norm = 0.0;
    double sup_norm = 0.0;
    bool escaped = false;
    double t_end = 0.0;
};

// Tracks sup(|x| + |x'|) over [0, t_max]; stops early once it exceeds bound.
BoundednessReport boundedness_probe(const OscillatorProblem& prob, std::array<double, 2> initial, double t_max,
                                    double bound, const StepControl& ctl = {1e-11, 1e-11, 1e-2, 1e-13});

}  // namespace normkam
