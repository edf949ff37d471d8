#include <doctest.h>

#include <cmath>
#include <numbers>

#include "normkam/diophantine.hpp"
#include "normkam/errors.hpp"
#include "oracles.hpp"

using namespace normkam;
using std::numbers::pi;

namespace {

const double golden = pi * (std::sqrt(5.0) - 1.0);  // 2 pi g, g = (sqrt 5 - 1)/2

// Plain double loop, kept separate from the library's split/parallel scan.
double naive_best(const std::vector<double>& omega, double gamma0, double sigma, int kmax)
{
    double best = INFINITY;
    if (omega.size() == 1) {
        for (int k = 1; k <= kmax; ++k) {
            const double x = k * omega[0] * gamma0 / (2 * pi);
            best = std::min(best, std::abs(x - std::nearbyint(x)) * std::pow(k, sigma));
        }
        return best;
    }
    for (int a = 0; a <= kmax; ++a) {
        for (int b = -kmax; b <= kmax; ++b) {
            if (a == 0 && b <= 0) {
                continue;
            }
            const double x = (a * omega[0] + b * omega[1]) * gamma0 / (2 * pi);
            const double norm = std::max(std::abs(a), std::abs(b));
            best = std::min(best, std::abs(x - std::nearbyint(x)) * std::pow(norm, sigma));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("exact resonance 2 pi / 3 fails at k = 3")
{
    const auto rep = check_condition({{1.0}, 2 * pi / 3, 1e-3, 1.0, 50});
    CHECK_FALSE(rep.passes);
    REQUIRE(rep.worst_k.size() == 1);
    CHECK(std::abs(rep.worst_k[0]) == 3);
    CHECK(rep.worst_margin < 1e-14);
    CHECK(best_constant({1.0}, 2 * pi / 3, 1.0, 50) < 1e-13);
}

TEST_CASE("golden mean passes at c0 = 0.38 up to 1e5")
{
    const auto rep = check_condition({{1.0}, golden, 0.38, 1.0, 100000});
    CHECK(rep.passes);
    CHECK(rep.best_c0 == doctest::Approx(0.3819660112501051).epsilon(1e-9));
}

TEST_CASE("golden mean: convergents approach 1/sqrt5")
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto q = oracle::convergent_denominators(g, 30);
    // q_n |q_n g - p_n| at the convergents, from the continued-fraction identity
    for (std::size_t n = 8; n + 1 < q.size() && q[n] < 100000; ++n) {
        const double x = q[n] * g;
        const double product = q[n] * std::abs(x - std::nearbyint(x));
        CHECK(product == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-3));
    }
    // Away from the first few k the scan minimum sits at the same value.
    double tail = INFINITY;
    for (int k = 100; k <= 100000; ++k) {
        const double x = k * g;
        tail = std::min(tail, k * std::abs(x - std::nearbyint(x)));
    }
    CHECK(tail == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-3));
}

TEST_CASE("two frequencies: worst margin matches an independent scan")
{
    const std::vector<double> omega{1.0, std::sqrt(2.0)};
    const auto rep = check_condition({omega, 1.0, 1e-3, 3.0, 200});
    const double ref = naive_best(omega, 1.0, 3.0, 200);
    CHECK(rep.best_c0 == doctest::Approx(ref).epsilon(1e-12));
    CHECK(rep.passes == (1e-3 <= ref));
}

TEST_CASE("best_constant is nonincreasing and consistent with check_condition")
{
    double prev = INFINITY;
    for (int kmax : {10, 20, 40, 80, 160, 320}) {
        const double b = best_constant({1.0}, 1.0, 1.0, kmax);
        CHECK(b <= prev);
        prev = b;
        CHECK(check_condition({{1.0}, 1.0, b, 1.0, kmax}).passes);
        CHECK_FALSE(check_condition({{1.0}, 1.0, std::nextafter(b, 1.0), 1.0, kmax}).passes);
    }
}

TEST_CASE("margins are invariant under integer shifts")
{
    for (double x : {0.3, 1.7, -2.45, 1e6 + 0.125}) {
        const double d = distance_to_integer(x);
        for (int n : {-3, 1, 17}) {
            CHECK(distance_to_integer(x + n) == doctest::Approx(d).epsilon(1e-9));
        }
        CHECK(distance_to_integer(d) == doctest::Approx(d));
    }
}

TEST_CASE("oscillator frequency condition")
{
    CHECK_FALSE(check_oscillator_condition(1.0, 0.2, 1.0, 100).passes);
    CHECK(check_oscillator_condition(1.0, 0.2, 1.0, 100).worst_k == std::vector<int>{1});
    CHECK(check_oscillator_condition(std::sqrt(2.0), 0.2, 1.0, 100000).passes);
    CHECK_FALSE(check_oscillator_condition(2.0, 0.2, 1.0, 100).passes);
}

TEST_CASE("l1 norm option and default divisor bound")
{
    const DiophantineParams p{{1.0, std::sqrt(3.0)}, 0.9, 1e-3, 2.0, 20, DivisorNorm::L1};
    const auto rep = check_condition(p);
    // |k|_1 >= |k|_inf, so the weighted minimum can only grow
    CHECK(rep.best_c0 >= best_constant(p.omega, p.gamma0, p.sigma, p.scan_cutoff, DivisorNorm::Linf));
    CHECK(default_min_divisor({{1.0}, golden, 0.38, 1.0, 32}) == doctest::Approx(4 * 0.38 / 32));
    CHECK_THROWS(check_condition({{}, 1.0, 1e-3, 1.0, 10}));
}
