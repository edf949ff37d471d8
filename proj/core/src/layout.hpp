#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "spectral_grid.hpp"

namespace normkam::detail {

// Truncation box shared by every series built with the same (freq, N, K).
struct Layout {
    std::vector<double> freq;
    int dim = 0;
    int order_max = 0;
    int cutoff = 0;
    int side = 0;            // 2K + 1
    std::size_t modes = 0;   // side^dim
    std::vector<int> digits; // modes * dim mode components
    std::vector<double> dot; // <j, omega>
    std::vector<double> l1;  // |j|_1
    double freq_inf = 0.0;   // |omega|_inf

    std::shared_ptr<const SpectralGrid> grid;
    std::vector<std::size_t> bin_of_mode;
    std::vector<std::ptrdiff_t> mode_of_bin;  // -1 outside the cutoff

    std::size_t rows() const { return static_cast<std::size_t>(order_max) + 1; }
    std::size_t size() const { return rows() * modes; }
    std::size_t zero_mode() const { return modes / 2; }
    std::size_t negate(std::size_t idx) const { return modes - 1 - idx; }
    std::size_t at(int k, std::size_t idx) const { return static_cast<std::size_t>(k) * modes + idx; }
    // Flat index of j, or -1 if outside the box.
    std::ptrdiff_t index(std::span<const int> j) const;
};

std::shared_ptr<const Layout> shared_layout(const std::vector<double>& freq, int order_max, int cutoff);

// Row synthesis/analysis on the layout's grid. `work` must hold grid->points().
void row_to_grid(const Layout& lay, std::span<const std::complex<double>> row, std::complex<double>* work,
                 double* values);
// Returns the l1 mass of grid modes outside the cutoff.
double grid_to_row(const Layout& lay, const double* values, std::complex<double>* work,
                   std::span<std::complex<double>> row);

void enforce_reality(const Layout& lay, std::vector<std::complex<double>>& coeffs);

}  // namespace normkam::detail
