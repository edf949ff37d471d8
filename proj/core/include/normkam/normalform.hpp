#pragma once

#include <optional>
#include <string>
#include <vector>

#include "normkam/cylinder_map.hpp"
#include "normkam/diophantine.hpp"
#include "normkam/series.hpp"

namespace normkam {

// Domain-shrink and smallness sequences of the iteration. Recorded for
// diagnostics; they do not gate the computation.
struct KamSchedule {
    int alpha = 1;
    double t0 = 0.5;
    double rho0 = 0.5;
    double d0 = 1e-3;
    int n_max = 4;

    void validate() const;
    // t_n = (t0/2)(1 + (2/3)^n), rho_n = (rho0/2)(1 + (2/3)^n)
    double t(int n) const;
    double rho(int n) const;
    StripDomain domain(int n) const { return {t(n), rho(n)}; }
    // d_{n+1} = (3/2)^n d_n^{4/3}
    double d(int n) const;
    // s_n = 2^{alpha+n} + 1
    int s(int n) const;
};

struct Tolerances {
    // Leftover coefficients below order 2s-1, relative to |f|+|g|.
    double residual = 1e-10;
    // theta-means of the symmetrized residual, relative to |f|+|g|.
    double mean = 1e-9;
    // Parity defect of the generators before projection, relative.
    double parity = 1e-8;
    // Zero means the 4 c0 / Kmax^sigma bound of the Diophantine data.
    double min_divisor = 0.0;
    // Absolute allowance added to the relative mean and residual checks so
    // that a residual at roundoff level is not mistaken for structure.
    double floor = 1e-15;
};

struct StepReport {
    int step = 0;
    int order_in = 0;
    int order_out = 0;
    double residual_before = 0.0;
    double residual_after = 0.0;
    // |{p*}_K| + |{q*}_K|
    double mean_norm = 0.0;
    double reversibility_in = 0.0;
    double reversibility_out = 0.0;
    double u_norm = 0.0;
    double v_norm = 0.0;
    double du_norm = 0.0;
    double dv_norm = 0.0;
    // Largest coefficient below order 2s-1 removed after the conjugacy.
    double cleanup_max = 0.0;
    double parity_residual = 0.0;
    double truncation_loss = 0.0;
    double min_divisor = 0.0;
    int conjugacy_passes = 0;
    // d_{n+1} reference value from the schedule (0 when not run by the driver).
    double d_reference = 0.0;
};

struct KamStepResult {
    ReversibleCylinderMap map;
    NearIdentityTransform transform;
    StepReport report;
};

// One reversibility-preserving KAM step at residual order s: solves the
// truncated modified equations for (u, v) and conjugates. Throws
// ObstructionDetected, SmallDivisor, ParityViolation or OrderDoublingFailure.
KamStepResult kam_step(const ReversibleCylinderMap& m, int s, const DiophantineParams& dioph,
                       const Tolerances& tol = {}, const StripDomain& dom = {});

enum class StopReason { Converged, OrderExhausted, MaxSteps, Obstruction };

std::string to_string(StopReason r);

struct ObstructionInfo {
    int step = 0;
    int order = 0;
    double value = 0.0;
    double radial_value = 0.0;
};

struct KamResult {
    NearIdentityTransform transform;
    ReversibleCylinderMap map;
    std::vector<StepReport> reports;
    StopReason stop = StopReason::MaxSteps;
    std::optional<ObstructionInfo> obstruction;
    // Residual sup-majorant before the first step and after each step.
    std::vector<double> decay;
};

// Repeats kam_step with s -> 2s - 1 until the residual vanishes, exceeds
// order_max, n_max steps are done or an obstruction is met.
KamResult kam_iterate(const ReversibleCylinderMap& m, const KamSchedule& schedule, const DiophantineParams& dioph,
                      const Tolerances& tol = {});

// Least-squares slope of log d_{n+1} against log d_n over positive entries.
// Returns nullopt with fewer than two pairs.
std::optional<double> fit_decay_exponent(const std::vector<double>& decay);

struct BirkhoffStage {
    int order = 0;
    // "radial" or "angular"
    std::string kind;
    // theta-mean left in the stage's right-hand side
    double mean = 0.0;
    double generator_norm = 0.0;
};

struct BirkhoffOptions {
    // Project generators onto G-commuting parity (odd angle, even radius).
    bool symmetrize_generators = true;
    double min_divisor = 0.0;
    // Leftovers below the target order up to this size (relative to |f|+|g|)
    // are treated as roundoff and dropped.
    double cleanup_tol = 1e-12;
};

struct BirkhoffResult {
    ReversibleCylinderMap map;
    // gammas[k-1] = gamma_k, k = 1..N-1
    std::vector<double> gammas;
    NearIdentityTransform transform;
    std::vector<BirkhoffStage> stages;
    // Order of f - sum gamma_k r^k and g after reduction (empty if zero).
    std::optional<int> residual_order;
    // Largest non-normal coefficient found below the target order.
    double leftover = 0.0;
};

// Reduces orders 1..n-1 to (theta + gamma0 + sum gamma_k r^k, r) by radial and
// angular conjugations. map = transform^{-1} o m o transform.
BirkhoffResult birkhoff_reduce(const ReversibleCylinderMap& m, int n, const DiophantineParams& dioph,
                               const BirkhoffOptions& opt = {});

// Synthetic test maps. Both are conjugates V o M0 o V^{-1} of a normal form M0
// by a G-commuting V with generator size eps starting at order `order`.
struct SyntheticSpec {
    std::vector<double> freq{1.0};
    double gamma0 = 0.0;
    double eps = 1e-3;
    int order = 3;
    int order_max = 16;
    int cutoff = 32;
};

// The generator V used by the builders below.
NearIdentityTransform synthetic_generator(const SyntheticSpec& spec);
ReversibleCylinderMap make_linearizable_map(const SyntheticSpec& spec);
// Normal form carries the twist delta * r^twist_order.
ReversibleCylinderMap make_obstructed_map(const SyntheticSpec& spec, double delta, int twist_order);

}  // namespace normkam
