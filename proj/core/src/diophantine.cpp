#include "normkam/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "normkam/parallel.hpp"

namespace normkam {

namespace {

struct Candidate {
    double product = std::numeric_limits<double>::infinity();
    double margin = 0.0;
    std::vector<int> k;
};

// One representative of each pair +-k: the first nonzero component is positive.
Candidate scan(const std::vector<double>& omega, double gamma0, double sigma, int kmax, DivisorNorm norm)
{
    const int m = static_cast<int>(omega.size());
    const double scale = gamma0 / (2.0 * std::numbers::pi);

    // Work is split by the leading component k_0 in [0, kmax]; each slice is
    // scanned in lexicographic order and the slices are merged in order.
    std::vector<Candidate> slices(static_cast<std::size_t>(kmax) + 1);
    parallel_for(static_cast<std::size_t>(kmax) + 1, [&](std::size_t lead) {
        Candidate best;
        std::vector<int> k(static_cast<std::size_t>(m), 0);
        k[0] = static_cast<int>(lead);
        // Remaining components run over [-kmax, kmax]; if lead == 0 the rest
        // must itself be lexicographically positive.
        const int rest = m - 1;
        std::vector<int> tail(static_cast<std::size_t>(rest), -kmax);
        while (true) {
            for (int d = 0; d < rest; ++d) {
                k[static_cast<std::size_t>(d) + 1] = tail[static_cast<std::size_t>(d)];
            }
            bool positive = lead > 0;
            if (!positive) {
                for (int d = 1; d < m; ++d) {
                    if (k[static_cast<std::size_t>(d)] != 0) {
                        positive = k[static_cast<std::size_t>(d)] > 0;
                        break;
                    }
                }
            }
            if (positive) {
                double dot = 0.0;
                double kn = 0.0;
                for (int d = 0; d < m; ++d) {
                    const double c = k[static_cast<std::size_t>(d)];
                    dot += c * omega[static_cast<std::size_t>(d)];
                    kn = norm == DivisorNorm::Linf ? std::max(kn, std::abs(c)) : kn + std::abs(c);
                }
                const double margin = distance_to_integer(dot * scale);
                const double product = margin * std::pow(kn, sigma);
                if (product < best.product) {
                    best = {product, margin, k};
                }
            }
            int d = rest - 1;
            while (d >= 0 && tail[static_cast<std::size_t>(d)] == kmax) {
                tail[static_cast<std::size_t>(d)] = -kmax;
                --d;
            }
            if (d < 0) {
                break;
            }
            ++tail[static_cast<std::size_t>(d)];
        }
        slices[lead] = std::move(best);
    });

    Candidate best;
    for (auto& c : slices) {
        if (c.product < best.product) {
            best = std::move(c);
        }
    }
    return best;
}

DiophantineReport to_report(Candidate c, double c0)
{
    DiophantineReport r;
    r.best_c0 = c.product;
    r.worst_margin = c.margin;
    r.worst_k = std::move(c.k);
    r.passes = c0 <= r.best_c0;
    return r;
}

}  // namespace

void DiophantineParams::validate() const
{
    if (omega.empty()) {
        throw std::invalid_argument("DiophantineParams: omega is empty");
    }
    if (!(c0 > 0.0)) {
        throw std::invalid_argument("DiophantineParams: c0 must be positive");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("DiophantineParams: sigma must be positive");
    }
    if (scan_cutoff < 1) {
        throw std::invalid_argument("DiophantineParams: scan cutoff must be at least 1");
    }
}

double distance_to_integer(double x)
{
    return std::abs(x - std::nearbyint(x));
}

DiophantineReport check_condition(const DiophantineParams& p)
{
    p.validate();
    return to_report(scan(p.omega, p.gamma0, p.sigma, p.scan_cutoff, p.norm), p.c0);
}

double best_constant(const std::vector<double>& omega, double gamma0, double sigma, int kmax, DivisorNorm norm)
{
    if (kmax < 1 || omega.empty()) {
        throw std::invalid_argument("best_constant: need kmax >= 1 and nonempty omega");
    }
    return scan(omega, gamma0, sigma, kmax, norm).product;
}

DiophantineReport check_oscillator_condition(double omega, double c0, double sigma, int kmax)
{
    if (!(omega > 0.0)) {
        throw std::invalid_argument("check_oscillator_condition: omega must be positive");
    }
    // |k/omega - l| is the Diophantine margin of frequency 1 and step 2pi/omega.
    return check_condition({{1.0}, 2.0 * std::numbers::pi / omega, c0, sigma, kmax, DivisorNorm::Linf});
}

double default_min_divisor(const DiophantineParams& p)
{
    return 4.0 * p.c0 / std::pow(static_cast<double>(p.scan_cutoff), p.sigma);
}

}  // namespace normkam
