#include <algorithm>
#include <cmath>
#include <numbers>

#include "normkam/errors.hpp"
#include "normkam/oscillator.hpp"
#include "normkam/parallel.hpp"

namespace normkam {

std::vector<double> lambda_grid(double lo, double hi, double step)
{
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0)) {
        throw std::invalid_argument("lambda_grid: need 0 < lo <= hi and step > 0");
    }
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        out.push_back(lo + static_cast<double>(i) * step);
    }
    return out;
}

TwistFitReport fit_twist(const OscillatorProblem& prob, const TwistFitOptions& opt)
{
    const auto& lams = opt.lambdas;
    if (lams.size() < 3 || opt.phases < 1) {
        throw FitIllConditioned("fit_twist: need at least 3 lambda levels and one phase");
    }
    const auto [lo, hi] = std::minmax_element(lams.begin(), lams.end());
    if (!(*lo > 0.0) || *hi / *lo < 1.5) {
        throw FitIllConditioned("fit_twist: lambda range too narrow (need lambda_max / lambda_min >= 1.5)");
    }

    // S3 does not depend on lambda; one instance serves every level.
    const AveragingTransforms avg(prob, *lo);
    const int phases = opt.phases;
    std::vector<TwistSample> samples(lams.size() * static_cast<std::size_t>(phases));
    parallel_for(samples.size(), [&](std::size_t idx) {
        const double lam = lams[idx / static_cast<std::size_t>(phases)];
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(idx % static_cast<std::size_t>(phases)) / phases;
        const PolarState out = poincare_map(prob, {lam, 0.0, phase}, opt.poincare);
        TwistSample s;
        s.lambda = lam;
        s.phase = phase;
        s.t_advance = out.t - phase;
        s.r_return = out.r;
        // At theta = 0 mod 2pi, S1 and S2 vanish, so lambda = r and tau = t.
        s.sigma_advance = s.t_advance + avg.s3(0.0, out.t) / out.r - avg.s3(0.0, phase) / lam;
        samples[idx] = s;
    });

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < lams.size(); ++i) {
        double mean = 0.0;
        for (int k = 0; k < phases; ++k) {
            const auto& s = samples[i * static_cast<std::size_t>(phases) + static_cast<std::size_t>(k)];
            mean += opt.raw ? s.t_advance : s.sigma_advance;
        }
        xs.push_back(1.0 / lams[i]);
        ys.push_back(mean / phases);
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    TwistFitReport rep;
    rep.gamma1_hat = sxy / sxx;
    rep.gamma0_hat = my - rep.gamma1_hat * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (rep.gamma0_hat + rep.gamma1_hat * xs[i]);
        rep.residuals.push_back(r);
        ss += r * r;
    }
    rep.residual_rms = std::sqrt(ss / n);
    rep.samples = std::move(samples);
    return rep;
}

}  // namespace normkam
