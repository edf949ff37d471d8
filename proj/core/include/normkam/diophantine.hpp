#pragma once

#include <vector>

namespace normkam {

enum class DivisorNorm { Linf, L1 };

// Arithmetic data for |<k,omega> gamma0 / 2pi - j| >= c0 / |k|^sigma.
struct DiophantineParams {
    std::vector<double> omega;
    double gamma0 = 0.0;
    double c0 = 1e-3;
    double sigma = 1.0;
    int scan_cutoff = 32;
    DivisorNorm norm = DivisorNorm::Linf;

    void validate() const;
};

struct DiophantineReport {
    bool passes = true;
    std::vector<int> worst_k;
    // Distance to the nearest integer at worst_k.
    double worst_margin = 0.0;
    // min over the scan of margin * |k|^sigma; the condition holds iff c0 <= best_c0.
    double best_c0 = 0.0;
};

// Exhaustive scan over 0 < |k|_inf <= scan_cutoff (one of each +-k pair).
// worst_k minimizes margin * |k|^sigma, first in scan order on ties.
DiophantineReport check_condition(const DiophantineParams& p);

double best_constant(const std::vector<double>& omega, double gamma0, double sigma, int kmax,
                     DivisorNorm norm = DivisorNorm::Linf);

// |k / omega - l| >= c0 / |k|^sigma over 1 <= k <= kmax.
DiophantineReport check_oscillator_condition(double omega, double c0, double sigma, int kmax);

// Lower bound 4 c0 / kmax^sigma for |e^{i<j,omega>gamma0} - 1| over the scan.
double default_min_divisor(const DiophantineParams& p);

// Distance from x to the nearest integer.
double distance_to_integer(double x);

}  // namespace normkam
