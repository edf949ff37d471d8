#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "normkam/diophantine.hpp"
#include "normkam/errors.hpp"
#include "normkam/homological.hpp"
#include "oracles.hpp"

using namespace normkam;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};
const double golden = pi * (std::sqrt(5.0) - 1.0);

}  // namespace

TEST_CASE("quarter-turn example and back-substitution")
{
    const Series h = make_series({1.0}, {{3, {1}, 0.5}}, 5, 4);  // cos(theta) r^3
    const Series u = solve_difference(h, pi / 2, 0.0);
    for (double th : {0.0, 0.4, 2.1, 5.0}) {
        const double r = 0.8;
        CHECK(u.evaluate(th, r) == doctest::Approx((std::sin(th) - std::cos(th)) / 2 * r * r * r).epsilon(1e-14));
        // independent back-substitution through the direct-sum evaluator
        const double lhs = oracle::evaluate(u, th + pi / 2, r) - oracle::evaluate(u, th, r);
        CHECK(lhs == doctest::Approx(std::cos(th) * r * r * r).epsilon(1e-14));
    }
}

TEST_CASE("pure mean is not in the image; zero maps to zero")
{
    const Series h = make_series({1.0}, {{2, {0}, 1.0}}, 4, 4);
    CHECK_THROWS_AS(solve_difference(h, golden, 0.0), NotInImage);
    CHECK(solve_difference(Series::zero({1.0}, 4, 4), golden, 0.0).is_zero());
}

TEST_CASE("small divisors are refused")
{
    // gamma0 = 2 pi / 3 makes mode 3 resonant
    const Series h = make_series({1.0}, {{1, {3}, 1.0}}, 2, 4);
    CHECK_THROWS_AS(solve_difference(h, 2 * pi / 3, 1e-8), SmallDivisor);
    try {
        solve_difference(h, 2 * pi / 3 + 1e-10, 1e-6);
    } catch (const SmallDivisor& e) {
        CHECK(std::abs(e.mode()[0]) == 3);
        CHECK(e.divisor() < e.bound());
    }
}

TEST_CASE("exact inverse on the image for random right-hand sides")
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Series h = oracle::random_series(rng, {1.0}, 12, 64, 0, 12, 0.9, true);
        const Series u = solve_difference(h, golden, 0.0);
        const StripDomain dom{0.5, 0.5};
        CHECK(strip_norm(shift_angle(u, golden) - u - h, dom) <= 1e-12 * strip_norm(h, dom));
        CHECK(project_mean(u).is_zero());
    }
}

TEST_CASE("two-frequency solve")
{
    std::mt19937_64 rng(2);
    const std::vector<double> omega{1.0, std::sqrt(2.0)};
    const Series h = oracle::random_series(rng, omega, 4, 6, 1, 4, 0.5, true);
    const Series u = solve_difference(h, 1.0, 0.0);
    CHECK(strip_norm(shift_angle(u, 1.0) - u - h, {0.3, 0.5}) <= 1e-12 * strip_norm(h, {0.3, 0.5}));
}

TEST_CASE("linearity")
{
    std::mt19937_64 rng(3);
    const Series h1 = oracle::random_series(rng, {1.0}, 6, 16, 0, 6, 0.8, true);
    const Series h2 = oracle::random_series(rng, {1.0}, 6, 16, 0, 6, 0.8, true);
    const Series lhs = solve_difference(2.5 * h1 + (-0.75) * h2, golden, 0.0);
    const Series rhs = 2.5 * solve_difference(h1, golden, 0.0) + (-0.75) * solve_difference(h2, golden, 0.0);
    CHECK(oracle::max_diff(lhs, rhs) <= 1e-13 * coefficient_norm(lhs));
}

TEST_CASE("single-mode smoothing estimate and divisor bound")
{
    const int K = 32;
    const DiophantineParams p{{1.0}, golden, 0.38, 1.0, K};
    REQUIRE(check_condition(p).passes);
    for (int j = 1; j <= K; ++j) {
        const Series h = make_series({1.0}, {{1, {j}, 1.0}}, 2, K);
        const Series u = solve_difference(h, golden, 0.0);
        const double d = std::abs(std::polar(1.0, j * golden) - 1.0);
        CHECK(d >= 4 * p.c0 / std::pow(j, p.sigma));
        const StripDomain dom{0.2, 0.5};
        CHECK(strip_norm(u, dom) <= strip_norm(h, dom) / smallest_divisor(h, golden) * (1 + 1e-12));
    }
}

TEST_CASE("symmetrize_parity")
{
    const double g0 = 0.9;
    // f(theta) = cos(theta + g0/2) r^2 satisfies f(-theta - g0) = f(theta)
    const Series f = make_series({1.0}, {{2, {1}, 0.5 * std::polar(1.0, g0 / 2)}}, 4, 4);
    const auto sp = symmetrize_parity(f, f, g0);
    CHECK(oracle::max_diff(sp.p, f) < 1e-15);
    CHECK(coefficient_norm(sp.q) < 1e-15);

    const Series s = make_series({1.0}, {{2, {1}, -I / 2.0}}, 4, 4);  // sin(theta) r^2
    CHECK(coefficient_norm(symmetrize_parity(s, s, 0.0).p) < 1e-16);
    CHECK(sp.p_residual < 1e-15);
}

TEST_CASE("parity propagation: even about -gamma0/2 gives odd u")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Series raw = oracle::random_series(rng, {1.0}, 6, 24, 0, 6, 0.8, true);
        const Series even = 0.5 * (raw + reflect_about(raw, golden));
        const Series u = solve_difference(even, golden, 0.0);
        const auto rep = parity_of_solution(u, even, golden);
        CHECK(rep.expected == Parity::Odd);
        CHECK(rep.odd_residual <= 1e-12 * strip_norm(u, {}));

        const Series odd = 0.5 * (raw - reflect_about(raw, golden));
        const auto rep2 = parity_of_solution(solve_difference(odd, golden, 0.0), odd, golden);
        CHECK(rep2.expected == Parity::Even);
        CHECK(rep2.even_residual <= 1e-12 * strip_norm(solve_difference(odd, golden, 0.0), {}));
    }
}

TEST_CASE("parity report for the quarter-turn example and the zero series")
{
    const Series h = make_series({1.0}, {{3, {1}, 0.5}}, 5, 4);
    const Series u = solve_difference(h, pi / 2, 0.0);
    const auto rep = parity_of_solution(u, h, pi / 2);
    // cos(-theta - pi/2) = -sin(theta): h has no symmetry about -pi/4
    CHECK(rep.expected == Parity::Unknown);
    CHECK(rep.odd_residual > 0.1);

    const Series z = Series::zero({1.0}, 4, 4);
    const auto zr = parity_of_solution(z, z, golden);
    CHECK(zr.odd_residual == 0.0);
    CHECK(zr.even_residual == 0.0);
}

TEST_CASE("parity violation is raised when u breaks the expected symmetry")
{
    const Series h = make_series({1.0}, {{1, {1}, 0.5 * std::polar(1.0, golden / 2)}}, 3, 4);
    const Series wrong = make_series({1.0}, {{1, {1}, 0.5}}, 3, 4);  // even, but u should be odd
    CHECK_THROWS_AS(parity_of_solution(wrong, h, golden), ParityViolation);
}
