#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace normkam::detail {

// Uniform tensor grid on the torus T^dim with `side` points per axis and its
// complex DFT. Plans are shared; execution is thread-safe.
class SpectralGrid {
public:
    SpectralGrid(int dim, int side);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int dim() const { return dim_; }
    int side() const { return side_; }
    std::size_t points() const { return points_; }

    // In place, unnormalized: data[p] <- sum_b data[b] e^{+i<b, psi_p>}.
    void synthesize(std::complex<double>* data) const;
    // In place, unnormalized: data[b] <- sum_p data[p] e^{-i<b, psi_p>}.
    void analyze(std::complex<double>* data) const;

private:
    int dim_;
    int side_;
    std::size_t points_;
    void* backward_ = nullptr;
    void* forward_ = nullptr;
};

std::shared_ptr<const SpectralGrid> shared_grid(int dim, int side);

// Smallest 2^a 3^b 5^c >= n.
int smooth_size(int n);

}  // namespace normkam::detail
