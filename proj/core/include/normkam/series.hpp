#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace normkam {

using Complex = std::complex<double>;

namespace detail {
struct Layout;
}

/// Complex strip |Im theta| < t, |r| < rho on which series norms are measured.
struct StripDomain {
    double t = 0.5;
    double rho = 0.5;

    /// Throws std::invalid_argument unless 0 < t < 1 and 0 < rho < 1.
    void validate() const;
};

/// One coefficient chi_{kj} of  sum_{k,j} chi_{kj} e^{i<j,omega>theta} r^k.
struct SeriesEntry {
    int k = 0;
    std::vector<int> j;
    Complex value;
};

/// Truncated Fourier-Taylor expansion on the cylinder.
///
/// Coefficients live on the dense box 0 <= k <= order_max, |j|_inf <= cutoff,
/// stored order-major with modes in lexicographic order, so iteration order is
/// deterministic. Every instance satisfies the reality condition
/// conj(chi_{kj}) == chi_{k,-j}; evaluation at real points is therefore real.
///
/// Values are immutable once built; all algebra returns new series.
class FourierTaylorSeries {
public:
    static FourierTaylorSeries zero(std::vector<double> freq, int order_max, int cutoff);
    static FourierTaylorSeries zero_like(const FourierTaylorSeries& other);

    std::span<const double> freq() const;
    int dim() const;
    int order_max() const;
    int cutoff() const;
    std::size_t mode_count() const;

    /// chi_{kj}; zero for keys outside the truncation box.
    Complex coeff(int k, std::span<const int> j) const;
    Complex coeff(int k, std::initializer_list<int> j) const
    {
        return coeff(k, std::span<const int>(j.begin(), j.size()));
    }

    /// Smallest k carrying a nonzero coefficient; empty for the zero series.
    std::optional<int> order_min() const;
    /// Smallest k with some |chi_{kj}| > tol.
    std::optional<int> effective_order(double tol) const;
    bool is_zero() const;

    /// Accumulated l1 mass of coefficients dropped by truncation.
    double truncation_loss() const { return loss_; }

    double evaluate(double theta, double r) const;
    Complex evaluate(Complex theta, Complex r) const;

    /// Nonzero coefficients sorted by (k, lexicographic j).
    std::vector<SeriesEntry> entries() const;

    bool same_layout(const FourierTaylorSeries& other) const { return layout_ == other.layout_; }

    /// Raw order-k row (mode_count() values, lexicographic modes).
    std::span<const Complex> row(int k) const;
    /// Mode vector for a flat mode index.
    std::vector<int> mode(std::size_t index) const;

    const detail::Layout& layout() const { return *layout_; }

    // Internal construction from a full coefficient table; enforces reality and
    // pruning. Used by the algebra in this library.
    FourierTaylorSeries(std::shared_ptr<const detail::Layout> layout, std::vector<Complex> coeffs,
                        double loss = 0.0);

    std::span<const Complex> raw() const { return coeffs_; }
    const std::shared_ptr<const detail::Layout>& layout_ptr() const { return layout_; }

private:
    std::shared_ptr<const detail::Layout> layout_;
    std::vector<Complex> coeffs_;
    double loss_ = 0.0;
};

using Series = FourierTaylorSeries;

/// Builds a series from explicit coefficients. A coefficient whose partner
/// (k, -j) is also listed is averaged with it, (chi_{kj} + conj(chi_{k,-j}))/2;
/// a coefficient listed without its partner gets the conjugate partner filled in.
///
/// Throws InvalidFrequency for an empty or zero-containing freq and InvalidEntry
/// for keys outside the box, wrong mode dimension, duplicates or non-finite values.
Series make_series(std::vector<double> freq, std::span<const SeriesEntry> entries, int order_max,
                   int fourier_cutoff);
inline Series make_series(std::vector<double> freq, std::initializer_list<SeriesEntry> entries,
                          int order_max, int fourier_cutoff)
{
    return make_series(std::move(freq), std::span<const SeriesEntry>(entries.begin(), entries.size()),
                       order_max, fourier_cutoff);
}

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator-(const Series& a);
Series operator*(double c, const Series& a);

/// Cauchy product in both k and j, truncated to (order_max, cutoff).
/// Throws FrequencyMismatch unless both operands share freq and truncation.
Series multiply(const Series& a, const Series& b);

/// phi(theta + u(theta, r), r + v(theta, r)) expanded to the truncation order.
/// Throws NotNearIdentity if u or v has a nonzero order-0 part.
Series compose_map(const Series& phi, const Series& u, const Series& v);

/// phi(theta + c, r).
Series shift_angle(const Series& phi, double c);
/// phi(-theta, r).
Series reflect_angle(const Series& phi);
/// theta-average (j = 0 part).
Series project_mean(const Series& phi);
/// j != 0 part.
Series project_zero_mean(const Series& phi);

/// (phi(theta) + phi(-theta)) / 2 and (phi(theta) - phi(-theta)) / 2.
Series even_part(const Series& phi);
Series odd_part(const Series& phi);

Series derivative_theta(const Series& phi);
Series derivative_r(const Series& phi);

/// Keeps orders lo..hi (inclusive), drops the rest.
Series truncate_orders(const Series& phi, int lo, int hi);
/// phi_k(theta) as an order-0 series.
Series coefficient_function(const Series& phi, int k);
/// r^p * phi, truncated at order_max.
Series multiply_by_r_power(const Series& phi, int p);

/// Applies fn pointwise to a theta-only (order 0) series sampled on the
/// spectral grid and transforms back; modes beyond the cutoff are dropped.
Series apply_pointwise(const Series& theta_function, const std::function<double(double)>& fn);

/// Weighted majorant  sum |chi_{kj}| e^{|j|_1 |omega|_inf t} rho^k  (upper bound
/// for the sup norm on the strip).
double strip_norm(const Series& phi, const StripDomain& dom);
/// Plain l1 coefficient mass (t = 0, rho = 1).
double coefficient_norm(const Series& phi);
/// Largest |chi_{kj}| over orders lo..hi.
double max_abs_coeff(const Series& phi, int lo, int hi);

/// Largest |chi_{kj} - conj(chi_{k,-j})| over stored keys (0 for every valid series).
double reality_defect(const Series& phi);

}  // namespace normkam
