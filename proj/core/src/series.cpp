#include "normkam/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

#include "layout.hpp"
#include "normkam/errors.hpp"

namespace normkam {

namespace detail {

namespace {

constexpr double prune_threshold = 1e-300;

}  // namespace

std::ptrdiff_t Layout::index(std::span<const int> j) const
{
    if (static_cast<int>(j.size()) != dim) {
        return -1;
    }
    std::size_t idx = 0;
    for (int c : j) {
        if (c < -cutoff || c > cutoff) {
            return -1;
        }
        idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(c + cutoff);
    }
    return static_cast<std::ptrdiff_t>(idx);
}

std::shared_ptr<const Layout> shared_layout(const std::vector<double>& freq, int order_max, int cutoff)
{
    static std::mutex m;
    static std::map<std::tuple<std::vector<double>, int, int>, std::shared_ptr<const Layout>> cache;

    std::lock_guard lock(m);
    auto& slot = cache[{freq, order_max, cutoff}];
    if (slot) {
        return slot;
    }

    auto lay = std::make_shared<Layout>();
    lay->freq = freq;
    lay->dim = static_cast<int>(freq.size());
    lay->order_max = order_max;
    lay->cutoff = cutoff;
    lay->side = 2 * cutoff + 1;
    lay->modes = 1;
    for (int d = 0; d < lay->dim; ++d) {
        lay->modes *= static_cast<std::size_t>(lay->side);
    }
    for (double w : freq) {
        lay->freq_inf = std::max(lay->freq_inf, std::abs(w));
    }

    // Products have bandwidth 2K per axis; side > 4K keeps them alias-free.
    const int gside = smooth_size(4 * cutoff + 2);
    lay->grid = shared_grid(lay->dim, gside);
    lay->mode_of_bin.assign(lay->grid->points(), -1);
    lay->digits.resize(lay->modes * static_cast<std::size_t>(lay->dim));
    lay->dot.resize(lay->modes);
    lay->l1.resize(lay->modes);
    lay->bin_of_mode.resize(lay->modes);

    for (std::size_t idx = 0; idx < lay->modes; ++idx) {
        std::size_t rem = idx;
        std::size_t bin = 0;
        std::size_t stride = 1;
        double dot = 0.0;
        double l1 = 0.0;
        for (int d = lay->dim - 1; d >= 0; --d) {
            const int c = static_cast<int>(rem % static_cast<std::size_t>(lay->side)) - cutoff;
            rem /= static_cast<std::size_t>(lay->side);
            lay->digits[idx * static_cast<std::size_t>(lay->dim) + static_cast<std::size_t>(d)] = c;
            dot += c * freq[static_cast<std::size_t>(d)];
            l1 += std::abs(c);
            bin += static_cast<std::size_t>((c % gside + gside) % gside) * stride;
            stride *= static_cast<std::size_t>(gside);
        }
        lay->dot[idx] = dot;
        lay->l1[idx] = l1;
        lay->bin_of_mode[idx] = bin;
        lay->mode_of_bin[bin] = static_cast<std::ptrdiff_t>(idx);
    }
    slot = lay;
    return slot;
}

void row_to_grid(const Layout& lay, std::span<const std::complex<double>> row, std::complex<double>* work,
                 double* values)
{
    const std::size_t points = lay.grid->points();
    std::fill(work, work + points, std::complex<double>{});
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        work[lay.bin_of_mode[idx]] = row[idx];
    }
    lay.grid->synthesize(work);
    for (std::size_t p = 0; p < points; ++p) {
        values[p] = work[p].real();
    }
}

double grid_to_row(const Layout& lay, const double* values, std::complex<double>* work,
                   std::span<std::complex<double>> row)
{
    const std::size_t points = lay.grid->points();
    for (std::size_t p = 0; p < points; ++p) {
        work[p] = values[p];
    }
    lay.grid->analyze(work);
    const double scale = 1.0 / static_cast<double>(points);
    double dropped = 0.0;
    for (std::size_t b = 0; b < points; ++b) {
        const auto idx = lay.mode_of_bin[b];
        if (idx < 0) {
            dropped += std::abs(work[b]) * scale;
        } else {
            row[static_cast<std::size_t>(idx)] = work[b] * scale;
        }
    }
    return dropped;
}

void enforce_reality(const Layout& lay, std::vector<std::complex<double>>& coeffs)
{
    const std::size_t half = lay.modes / 2;
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        auto* row = coeffs.data() + k * lay.modes;
        for (std::size_t idx = 0; idx < half; ++idx) {
            const std::size_t neg = lay.negate(idx);
            const std::complex<double> c = 0.5 * (row[idx] + std::conj(row[neg]));
            row[idx] = c;
            row[neg] = std::conj(c);
        }
        row[half] = {row[half].real(), 0.0};
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            if (std::abs(row[idx]) < prune_threshold) {
                row[idx] = {};
            }
        }
    }
}

}  // namespace detail

using detail::Layout;

namespace {

void require_same_layout(const Series& a, const Series& b, const char* op)
{
    if (!a.same_layout(b)) {
        throw FrequencyMismatch(std::string(op) + ": operands differ in frequency or truncation");
    }
}

Series with_coeffs(const Series& like, std::vector<Complex> coeffs, double loss)
{
    return Series(like.layout_ptr(), std::move(coeffs), loss);
}

std::vector<Complex> copy_coeffs(const Series& s)
{
    return {s.raw().begin(), s.raw().end()};
}

// Lowest row holding a nonzero coefficient, or rows() when zero.
int lowest_row(const Layout& lay, std::span<const Complex> coeffs)
{
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            if (coeffs[k * lay.modes + idx] != Complex{}) {
                return static_cast<int>(k);
            }
        }
    }
    return static_cast<int>(lay.rows());
}

// Real power series coefficients c[0..n], truncated product into out.
void series_mul(const double* a, int a_lo, const double* b, int b_lo, double* out, int n)
{
    for (int k = 0; k <= n; ++k) {
        out[k] = 0.0;
    }
    for (int i = a_lo; i <= n; ++i) {
        const double ai = a[i];
        if (ai == 0.0) {
            continue;
        }
        for (int l = b_lo; i + l <= n; ++l) {
            out[i + l] += ai * b[l];
        }
    }
}

}  // namespace

void StripDomain::validate() const
{
    if (!(t > 0.0 && t < 1.0)) {
        throw std::invalid_argument("StripDomain: t must lie in (0, 1)");
    }
    if (!(rho > 0.0 && rho < 1.0)) {
        throw std::invalid_argument("StripDomain: rho must lie in (0, 1)");
    }
}

FourierTaylorSeries::FourierTaylorSeries(std::shared_ptr<const detail::Layout> layout, std::vector<Complex> coeffs,
                                         double loss)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs)), loss_(loss)
{
    if (coeffs_.size() != layout_->size()) {
        throw std::invalid_argument("FourierTaylorSeries: coefficient table has wrong size");
    }
    detail::enforce_reality(*layout_, coeffs_);
}

FourierTaylorSeries FourierTaylorSeries::zero(std::vector<double> freq, int order_max, int cutoff)
{
    return make_series(std::move(freq), std::span<const SeriesEntry>{}, order_max, cutoff);
}

FourierTaylorSeries FourierTaylorSeries::zero_like(const FourierTaylorSeries& other)
{
    return Series(other.layout_, std::vector<Complex>(other.layout_->size()));
}

std::span<const double> FourierTaylorSeries::freq() const { return layout_->freq; }
int FourierTaylorSeries::dim() const { return layout_->dim; }
int FourierTaylorSeries::order_max() const { return layout_->order_max; }
int FourierTaylorSeries::cutoff() const { return layout_->cutoff; }
std::size_t FourierTaylorSeries::mode_count() const { return layout_->modes; }

Complex FourierTaylorSeries::coeff(int k, std::span<const int> j) const
{
    if (k < 0 || k > layout_->order_max) {
        return {};
    }
    const auto idx = layout_->index(j);
    if (idx < 0) {
        return {};
    }
    return coeffs_[layout_->at(k, static_cast<std::size_t>(idx))];
}

std::optional<int> FourierTaylorSeries::order_min() const
{
    const int k = lowest_row(*layout_, coeffs_);
    if (k > layout_->order_max) {
        return std::nullopt;
    }
    return k;
}

std::optional<int> FourierTaylorSeries::effective_order(double tol) const
{
    const auto& lay = *layout_;
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            if (std::abs(coeffs_[lay.at(k, idx)]) > tol) {
                return k;
            }
        }
    }
    return std::nullopt;
}

bool FourierTaylorSeries::is_zero() const { return !order_min().has_value(); }

double FourierTaylorSeries::evaluate(double theta, double r) const
{
    return evaluate(Complex{theta, 0.0}, Complex{r, 0.0}).real();
}

Complex FourierTaylorSeries::evaluate(Complex theta, Complex r) const
{
    const auto& lay = *layout_;
    std::vector<Complex> phase(lay.modes);
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        phase[idx] = std::exp(Complex{0.0, lay.dot[idx]} * theta);
    }
    Complex acc{};
    for (int k = lay.order_max; k >= 0; --k) {
        Complex rowsum{};
        const Complex* row = coeffs_.data() + lay.at(k, 0);
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            if (row[idx] != Complex{}) {
                rowsum += row[idx] * phase[idx];
            }
        }
        acc = acc * r + rowsum;
    }
    return acc;
}

std::vector<SeriesEntry> FourierTaylorSeries::entries() const
{
    const auto& lay = *layout_;
    std::vector<SeriesEntry> out;
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            const Complex c = coeffs_[lay.at(k, idx)];
            if (c != Complex{}) {
                out.push_back({k, mode(idx), c});
            }
        }
    }
    return out;
}

std::span<const Complex> FourierTaylorSeries::row(int k) const
{
    if (k < 0 || k > layout_->order_max) {
        throw std::out_of_range("FourierTaylorSeries::row: order out of range");
    }
    return std::span<const Complex>(coeffs_).subspan(layout_->at(k, 0), layout_->modes);
}

std::vector<int> FourierTaylorSeries::mode(std::size_t index) const
{
    const auto d = static_cast<std::size_t>(layout_->dim);
    return {layout_->digits.begin() + static_cast<std::ptrdiff_t>(index * d),
            layout_->digits.begin() + static_cast<std::ptrdiff_t>((index + 1) * d)};
}

Series make_series(std::vector<double> freq, std::span<const SeriesEntry> entries, int order_max,
                   int fourier_cutoff)
{
    if (freq.empty()) {
        throw InvalidFrequency("make_series: frequency vector is empty");
    }
    for (double w : freq) {
        if (!std::isfinite(w) || w == 0.0) {
            throw InvalidFrequency("make_series: frequencies must be finite and nonzero");
        }
    }
    if (order_max < 0) {
        throw InvalidEntry("make_series: order_max must be nonnegative");
    }
    if (fourier_cutoff < 1) {
        throw InvalidEntry("make_series: fourier cutoff must be at least 1");
    }
    auto lay = detail::shared_layout(freq, order_max, fourier_cutoff);

    std::vector<Complex> coeffs(lay->size());
    std::vector<char> given(lay->size(), 0);
    for (const auto& e : entries) {
        if (e.k < 0 || e.k > order_max) {
            throw InvalidEntry("make_series: order " + std::to_string(e.k) + " outside [0, order_max]");
        }
        const auto idx = lay->index(e.j);
        if (idx < 0) {
            throw InvalidEntry("make_series: mode outside the Fourier cutoff or of wrong dimension");
        }
        if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
            throw InvalidEntry("make_series: non-finite coefficient");
        }
        const auto flat = lay->at(e.k, static_cast<std::size_t>(idx));
        if (given[flat] != 0) {
            throw InvalidEntry("make_series: duplicate coefficient key");
        }
        given[flat] = 1;
        coeffs[flat] = e.value;
    }
    // Lone entries get their conjugate partner; the Series constructor then
    // averages each pair.
    for (int k = 0; k <= order_max; ++k) {
        for (std::size_t idx = 0; idx < lay->modes; ++idx) {
            const auto flat = lay->at(k, idx);
            const auto partner = lay->at(k, lay->negate(idx));
            if (given[flat] != 0 && given[partner] == 0) {
                coeffs[partner] = std::conj(coeffs[flat]);
            }
        }
    }
    return Series(lay, std::move(coeffs));
}

Series operator+(const Series& a, const Series& b)
{
    require_same_layout(a, b, "operator+");
    auto c = copy_coeffs(a);
    const auto rb = b.raw();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] += rb[i];
    }
    return with_coeffs(a, std::move(c), a.truncation_loss() + b.truncation_loss());
}

Series operator-(const Series& a, const Series& b)
{
    require_same_layout(a, b, "operator-");
    auto c = copy_coeffs(a);
    const auto rb = b.raw();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] -= rb[i];
    }
    return with_coeffs(a, std::move(c), a.truncation_loss() + b.truncation_loss());
}

Series operator-(const Series& a)
{
    auto c = copy_coeffs(a);
    for (auto& x : c) {
        x = -x;
    }
    return with_coeffs(a, std::move(c), a.truncation_loss());
}

Series operator*(double s, const Series& a)
{
    auto c = copy_coeffs(a);
    for (auto& x : c) {
        x *= s;
    }
    return with_coeffs(a, std::move(c), std::abs(s) * a.truncation_loss());
}

Series multiply(const Series& a, const Series& b)
{
    require_same_layout(a, b, "multiply");
    const auto& lay = a.layout();
    const auto ka = a.order_min();
    const auto kb = b.order_min();
    if (!ka || !kb || *ka + *kb > lay.order_max) {
        // Everything lands beyond the truncation order.
        double dropped = 0.0;
        if (ka && kb) {
            dropped = coefficient_norm(a) * coefficient_norm(b);
        }
        return Series(a.layout_ptr(), std::vector<Complex>(lay.size()),
                      a.truncation_loss() + b.truncation_loss() + dropped);
    }
    const int n = lay.order_max;
    const std::size_t points = lay.grid->points();
    std::vector<Complex> work(points);
    std::vector<double> ga(lay.size() / lay.modes * points);
    std::vector<double> gb(ga.size());
    for (int k = *ka; k <= n - *kb; ++k) {
        detail::row_to_grid(lay, a.row(k), work.data(), ga.data() + static_cast<std::size_t>(k) * points);
    }
    for (int k = *kb; k <= n - *ka; ++k) {
        detail::row_to_grid(lay, b.row(k), work.data(), gb.data() + static_cast<std::size_t>(k) * points);
    }

    std::vector<Complex> out(lay.size());
    std::vector<double> prod(points);
    double dropped = 0.0;
    for (int k = *ka + *kb; k <= n; ++k) {
        std::fill(prod.begin(), prod.end(), 0.0);
        for (int i = *ka; i <= k - *kb; ++i) {
            const double* x = ga.data() + static_cast<std::size_t>(i) * points;
            const double* y = gb.data() + static_cast<std::size_t>(k - i) * points;
            for (std::size_t p = 0; p < points; ++p) {
                prod[p] += x[p] * y[p];
            }
        }
        dropped += detail::grid_to_row(lay, prod.data(), work.data(),
                                       std::span<Complex>(out).subspan(lay.at(k, 0), lay.modes));
    }
    // Order overflow: bound the dropped mass by products of row l1 norms.
    std::vector<double> na(lay.rows()), nb(lay.rows());
    for (int k = 0; k <= n; ++k) {
        for (const auto& c : a.row(k)) {
            na[static_cast<std::size_t>(k)] += std::abs(c);
        }
        for (const auto& c : b.row(k)) {
            nb[static_cast<std::size_t>(k)] += std::abs(c);
        }
    }
    for (int i = *ka; i <= n; ++i) {
        for (int l = std::max(*kb, n + 1 - i); l <= n; ++l) {
            dropped += na[static_cast<std::size_t>(i)] * nb[static_cast<std::size_t>(l)];
        }
    }
    return Series(a.layout_ptr(), std::move(out), a.truncation_loss() + b.truncation_loss() + dropped);
}

Series compose_map(const Series& phi, const Series& u, const Series& v)
{
    require_same_layout(phi, u, "compose_map");
    require_same_layout(phi, v, "compose_map");
    const auto ou = u.order_min();
    const auto ov = v.order_min();
    if ((ou && *ou < 1) || (ov && *ov < 1)) {
        throw NotNearIdentity("compose_map: substitution terms must vanish at r = 0");
    }
    const auto kphi = phi.order_min();
    if (!kphi) {
        return Series::zero_like(phi);
    }
    if (!ou && !ov) {
        return phi;
    }

    const auto& lay = phi.layout();
    const int n = lay.order_max;
    const int k0 = *kphi;
    const int step = ou ? *ou : n + 1;
    const int amax = ou ? (n - k0) / step : 0;
    const std::size_t points = lay.grid->points();
    std::vector<Complex> work(points);

    std::vector<double> ugrid(lay.rows() * points, 0.0);
    std::vector<double> vgrid(lay.rows() * points, 0.0);
    if (ou) {
        for (int k = *ou; k <= n; ++k) {
            detail::row_to_grid(lay, u.row(k), work.data(), ugrid.data() + static_cast<std::size_t>(k) * points);
        }
    }
    if (ov) {
        for (int k = *ov; k <= n; ++k) {
            detail::row_to_grid(lay, v.row(k), work.data(), vgrid.data() + static_cast<std::size_t>(k) * points);
        }
    }

    // taylor[a] holds (d/dtheta)^a phi / a! on the grid for orders k0..n - a*step.
    std::vector<std::vector<double>> taylor(static_cast<std::size_t>(amax) + 1);
    std::vector<Complex> factor(lay.modes, Complex{1.0, 0.0});
    std::vector<Complex> scaled(lay.modes);
    for (int a = 0; a <= amax; ++a) {
        if (a > 0) {
            for (std::size_t idx = 0; idx < lay.modes; ++idx) {
                factor[idx] *= Complex{0.0, lay.dot[idx]} / static_cast<double>(a);
            }
        }
        const int top = n - a * step;
        auto& grid_a = taylor[static_cast<std::size_t>(a)];
        grid_a.assign(static_cast<std::size_t>(top - k0 + 1) * points, 0.0);
        for (int k = k0; k <= top; ++k) {
            const auto row = phi.row(k);
            for (std::size_t idx = 0; idx < lay.modes; ++idx) {
                scaled[idx] = row[idx] * factor[idx];
            }
            detail::row_to_grid(lay, scaled, work.data(),
                                grid_a.data() + static_cast<std::size_t>(k - k0) * points);
        }
    }

    const auto stride = static_cast<std::size_t>(n) + 1;
    std::vector<double> result(lay.rows() * points, 0.0);
    std::vector<double> wpow(stride * stride);
    std::vector<double> upow(stride), unext(stride), w(stride), acc(stride), tmp(stride);
    for (std::size_t p = 0; p < points; ++p) {
        // W = r + v_p(r), powers W^k for k0 <= k <= n.
        for (int k = 0; k <= n; ++k) {
            w[static_cast<std::size_t>(k)] = vgrid[static_cast<std::size_t>(k) * points + p];
        }
        w[1] += 1.0;
        std::fill(wpow.begin(), wpow.begin() + static_cast<std::ptrdiff_t>(stride), 0.0);
        wpow[0] = 1.0;
        for (int k = 1; k <= n; ++k) {
            series_mul(wpow.data() + static_cast<std::size_t>(k - 1) * stride, k - 1, w.data(), 1,
                       wpow.data() + static_cast<std::size_t>(k) * stride, n);
        }
        std::fill(upow.begin(), upow.end(), 0.0);
        upow[0] = 1.0;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int a = 0; a <= amax; ++a) {
            const int top = n - a * step;
            // tmp = sum_k taylor[a][k](p) W^k, orders up to top
            std::fill(tmp.begin(), tmp.end(), 0.0);
            const auto& grid_a = taylor[static_cast<std::size_t>(a)];
            for (int k = k0; k <= top; ++k) {
                const double c = grid_a[static_cast<std::size_t>(k - k0) * points + p];
                if (c == 0.0) {
                    continue;
                }
                const double* wk = wpow.data() + static_cast<std::size_t>(k) * stride;
                for (int q = k; q <= top; ++q) {
                    tmp[static_cast<std::size_t>(q)] += c * wk[q];
                }
            }
            // acc += U^a * tmp
            const int ulo = a * step;
            for (int i = ulo; i <= n; ++i) {
                const double ui = upow[static_cast<std::size_t>(i)];
                if (ui == 0.0) {
                    continue;
                }
                for (int q = k0; i + q <= n; ++q) {
                    acc[static_cast<std::size_t>(i + q)] += ui * tmp[static_cast<std::size_t>(q)];
                }
            }
            if (a < amax) {
                for (int k = 0; k <= n; ++k) {
                    tmp[static_cast<std::size_t>(k)] = ugrid[static_cast<std::size_t>(k) * points + p];
                }
                series_mul(upow.data(), ulo, tmp.data(), step, unext.data(), n);
                std::swap(upow, unext);
            }
        }
        for (int k = 0; k <= n; ++k) {
            result[static_cast<std::size_t>(k) * points + p] = acc[static_cast<std::size_t>(k)];
        }
    }

    std::vector<Complex> out(lay.size());
    double dropped = 0.0;
    for (int k = k0; k <= n; ++k) {
        dropped += detail::grid_to_row(lay, result.data() + static_cast<std::size_t>(k) * points, work.data(),
                                       std::span<Complex>(out).subspan(lay.at(k, 0), lay.modes));
    }
    return Series(phi.layout_ptr(), std::move(out),
                  phi.truncation_loss() + u.truncation_loss() + v.truncation_loss() + dropped);
}

Series shift_angle(const Series& phi, double c)
{
    const auto& lay = phi.layout();
    std::vector<Complex> rot(lay.modes);
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        rot[idx] = std::polar(1.0, lay.dot[idx] * c);
    }
    auto out = copy_coeffs(phi);
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            out[k * lay.modes + idx] *= rot[idx];
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series reflect_angle(const Series& phi)
{
    const auto& lay = phi.layout();
    auto out = copy_coeffs(phi);
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        auto* row = out.data() + k * lay.modes;
        std::reverse(row, row + lay.modes);
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series project_mean(const Series& phi)
{
    const auto& lay = phi.layout();
    std::vector<Complex> out(lay.size());
    for (int k = 0; k <= lay.order_max; ++k) {
        out[lay.at(k, lay.zero_mode())] = phi.raw()[lay.at(k, lay.zero_mode())];
    }
    return with_coeffs(phi, std::move(out), 0.0);
}

Series project_zero_mean(const Series& phi)
{
    const auto& lay = phi.layout();
    auto out = copy_coeffs(phi);
    for (int k = 0; k <= lay.order_max; ++k) {
        out[lay.at(k, lay.zero_mode())] = {};
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series even_part(const Series& phi)
{
    const auto& lay = phi.layout();
    auto out = copy_coeffs(phi);
    const auto src = phi.raw();
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            out[lay.at(k, idx)] = 0.5 * (src[lay.at(k, idx)] + src[lay.at(k, lay.negate(idx))]);
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series odd_part(const Series& phi)
{
    const auto& lay = phi.layout();
    auto out = copy_coeffs(phi);
    const auto src = phi.raw();
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            out[lay.at(k, idx)] = 0.5 * (src[lay.at(k, idx)] - src[lay.at(k, lay.negate(idx))]);
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series derivative_theta(const Series& phi)
{
    const auto& lay = phi.layout();
    auto out = copy_coeffs(phi);
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            out[k * lay.modes + idx] *= Complex{0.0, lay.dot[idx]};
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series derivative_r(const Series& phi)
{
    const auto& lay = phi.layout();
    std::vector<Complex> out(lay.size());
    const auto src = phi.raw();
    for (int k = 1; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            out[lay.at(k - 1, idx)] = static_cast<double>(k) * src[lay.at(k, idx)];
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series truncate_orders(const Series& phi, int lo, int hi)
{
    const auto& lay = phi.layout();
    std::vector<Complex> out(lay.size());
    const auto src = phi.raw();
    for (int k = std::max(lo, 0); k <= std::min(hi, lay.order_max); ++k) {
        std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(lay.at(k, 0)), lay.modes,
                    out.begin() + static_cast<std::ptrdiff_t>(lay.at(k, 0)));
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss());
}

Series coefficient_function(const Series& phi, int k)
{
    const auto& lay = phi.layout();
    std::vector<Complex> out(lay.size());
    if (k >= 0 && k <= lay.order_max) {
        const auto row = phi.row(k);
        std::copy(row.begin(), row.end(), out.begin());
    }
    return with_coeffs(phi, std::move(out), 0.0);
}

Series multiply_by_r_power(const Series& phi, int p)
{
    if (p < 0) {
        throw std::invalid_argument("multiply_by_r_power: negative power");
    }
    const auto& lay = phi.layout();
    std::vector<Complex> out(lay.size());
    const auto src = phi.raw();
    double dropped = 0.0;
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            const Complex c = src[lay.at(k, idx)];
            if (k + p <= lay.order_max) {
                out[lay.at(k + p, idx)] = c;
            } else {
                dropped += std::abs(c);
            }
        }
    }
    return with_coeffs(phi, std::move(out), phi.truncation_loss() + dropped);
}

Series apply_pointwise(const Series& theta_function, const std::function<double(double)>& fn)
{
    const auto& lay = theta_function.layout();
    const auto lo = theta_function.order_min();
    if (lo && *lo > 0) {
        // Only order-0 content may be present; a nonzero series starting above 0 is invalid.
        throw std::invalid_argument("apply_pointwise: expected a theta-only (order 0) series");
    }
    for (int k = 1; k <= lay.order_max; ++k) {
        for (const auto& c : theta_function.row(k)) {
            if (c != Complex{}) {
                throw std::invalid_argument("apply_pointwise: expected a theta-only (order 0) series");
            }
        }
    }
    const std::size_t points = lay.grid->points();
    std::vector<Complex> work(points);
    std::vector<double> values(points);
    detail::row_to_grid(lay, theta_function.row(0), work.data(), values.data());
    for (auto& x : values) {
        x = fn(x);
    }
    std::vector<Complex> out(lay.size());
    const double dropped =
        detail::grid_to_row(lay, values.data(), work.data(), std::span<Complex>(out).subspan(0, lay.modes));
    return Series(theta_function.layout_ptr(), std::move(out), theta_function.truncation_loss() + dropped);
}

double strip_norm(const Series& phi, const StripDomain& dom)
{
    const auto& lay = phi.layout();
    std::vector<double> weight(lay.modes);
    for (std::size_t idx = 0; idx < lay.modes; ++idx) {
        weight[idx] = std::exp(lay.l1[idx] * lay.freq_inf * dom.t);
    }
    double total = 0.0;
    double rk = 1.0;
    for (std::size_t k = 0; k < lay.rows(); ++k) {
        double rowsum = 0.0;
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            rowsum += std::abs(phi.raw()[k * lay.modes + idx]) * weight[idx];
        }
        total += rowsum * rk;
        rk *= dom.rho;
    }
    return total;
}

double coefficient_norm(const Series& phi)
{
    double total = 0.0;
    for (const auto& c : phi.raw()) {
        total += std::abs(c);
    }
    return total;
}

double max_abs_coeff(const Series& phi, int lo, int hi)
{
    const auto& lay = phi.layout();
    double m = 0.0;
    for (int k = std::max(lo, 0); k <= std::min(hi, lay.order_max); ++k) {
        for (const auto& c : phi.row(k)) {
            m = std::max(m, std::abs(c));
        }
    }
    return m;
}

double reality_defect(const Series& phi)
{
    const auto& lay = phi.layout();
    double m = 0.0;
    for (int k = 0; k <= lay.order_max; ++k) {
        for (std::size_t idx = 0; idx < lay.modes; ++idx) {
            m = std::max(m, std::abs(phi.raw()[lay.at(k, idx)] - std::conj(phi.raw()[lay.at(k, lay.negate(idx))])));
        }
    }
    return m;
}

}  // namespace normkam
