#include "spectral_grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace normkam::detail {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

SpectralGrid::SpectralGrid(int dim, int side) : dim_(dim), side_(side), points_(1)
{
    if (dim < 1 || side < 1) {
        throw std::invalid_argument("SpectralGrid: dim and side must be positive");
    }
    std::vector<int> n(static_cast<std::size_t>(dim), side);
    for (int d = 0; d < dim; ++d) {
        points_ *= static_cast<std::size_t>(side);
    }
    std::lock_guard lock(planner_mutex());
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * points_));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    backward_ = fftw_plan_dft(dim, n.data(), buf, buf, FFTW_BACKWARD, flags);
    forward_ = fftw_plan_dft(dim, n.data(), buf, buf, FFTW_FORWARD, flags);
    fftw_free(buf);
    if (backward_ == nullptr || forward_ == nullptr) {
        throw std::runtime_error("SpectralGrid: FFTW planning failed");
    }
}

SpectralGrid::~SpectralGrid()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
}

void SpectralGrid::synthesize(std::complex<double>* data) const
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

void SpectralGrid::analyze(std::complex<double>* data) const
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

std::shared_ptr<const SpectralGrid> shared_grid(int dim, int side)
{
    static std::mutex m;
    static std::map<std::pair<int, int>, std::shared_ptr<const SpectralGrid>> cache;
    std::lock_guard lock(m);
    auto& slot = cache[{dim, side}];
    if (!slot) {
        slot = std::make_shared<SpectralGrid>(dim, side);
    }
    return slot;
}

int smooth_size(int n)
{
    for (int c = std::max(n, 1);; ++c) {
        int r = c;
        for (int f : {2, 3, 5}) {
            while (r % f == 0) {
                r /= f;
            }
        }
        if (r == 1) {
            return c;
        }
    }
}

}  // namespace normkam::detail
