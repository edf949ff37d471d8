#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "normkam/cylinder_map.hpp"
#include "normkam/normalform.hpp"
#include "oracles.hpp"

using namespace normkam;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};
const double golden = pi * (std::sqrt(5.0) - 1.0);

// M(G(M(theta, r))) - G(theta, r) at a real point, through direct evaluation.
std::pair<double, double> pointwise_reversibility(const ReversibleCylinderMap& m, double th, double r)
{
    auto apply = [&](double a, double b) {
        return std::pair{a + m.gamma0 + oracle::evaluate(m.f, a, b), b + oracle::evaluate(m.g, a, b)};
    };
    const auto [a1, b1] = apply(th, r);
    const auto [a2, b2] = apply(-a1, b1);
    return {a2 + th, b2 - r};
}

// A transform commuting with G: u odd in theta, v even. The spectrum stays
// at |j| <= 3 so that Fourier truncation of products is negligible.
NearIdentityTransform symmetric_transform(std::mt19937_64& rng, int order_max, int cutoff, int lo, double eps)
{
    auto narrow = [&] {
        const Series s = oracle::random_series(rng, {1.0}, order_max, 3, lo, lo + 2, 0.5);
        return oracle::from_table(oracle::table(s), {1.0}, order_max, cutoff);
    };
    const Series a = narrow();
    const Series b = narrow();
    return {eps * odd_part(a), eps * even_part(b)};
}

}  // namespace

TEST_CASE("rigid rotation is reversible with zero residual")
{
    const Series z = Series::zero({1.0}, 8, 8);
    const ReversibleCylinderMap m{golden, z, z};
    const auto rep = check_reversibility(m, 0.0);
    CHECK(rep.passes);
    CHECK(rep.angular == 0.0);
    CHECK(rep.radial == 0.0);
    CHECK_FALSE(m.residual_order().has_value());
}

TEST_CASE("conjugating a normal form by a G-commuting transform stays reversible")
{
    std::mt19937_64 rng(7);
    const int N = 12, K = 16;
    const Series z = Series::zero({1.0}, N, K);
    const Series twist = make_series({1.0}, {{1, {0}, 0.3}}, N, K);
    const ReversibleCylinderMap normal{golden, twist, z};
    const NearIdentityTransform v = symmetric_transform(rng, N, K, 2, 1e-2);
    const auto [du, dv] = involution_defect(v);
    CHECK(du < 1e-16);
    CHECK(dv < 1e-16);
    const ReversibleCylinderMap m = conjugate(normal, invert_transform(v), v);
    CHECK(check_reversibility(m, 1e-12).passes);
    for (double th : {0.1, 1.3, 4.0}) {
        const auto [ea, er] = pointwise_reversibility(m, th, 0.05);
        CHECK(std::abs(ea) < 1e-12);
        CHECK(std::abs(er) < 1e-12);
    }
}

TEST_CASE("sin(theta) r twist at a quarter turn is not reversible")
{
    const double eps = 1e-2;
    const Series f = make_series({1.0}, {{1, {1}, -eps * I / 2.0}}, 6, 4);
    const ReversibleCylinderMap m{pi / 2, f, Series::zero({1.0}, 6, 4)};
    const auto rep = check_reversibility(m, 1e-12);
    CHECK_FALSE(rep.passes);
    const auto [a, b] = reversibility_residual(m);
    CHECK(a.order_min() == 1);
    // The order-1 angular residual agrees with the pointwise composition.
    const double r = 1e-4;
    const auto [ea, er] = pointwise_reversibility(m, 0.7, r);
    CHECK(ea == doctest::Approx(a.evaluate(0.7, r)).epsilon(1e-6));
    (void)er;
    (void)b;
}

TEST_CASE("series evaluation of maps and transforms matches direct sums")
{
    std::mt19937_64 rng(12);
    const Series f = oracle::random_series(rng, {1.0}, 6, 6, 1, 6);
    const Series g = oracle::random_series(rng, {1.0}, 6, 6, 1, 6);
    const ReversibleCylinderMap m{1.1, f, g};
    const auto [a, b] = m(0.3, 0.2);
    CHECK(a == doctest::Approx(0.3 + 1.1 + oracle::evaluate(f, 0.3, 0.2)).epsilon(1e-14));
    CHECK(b == doctest::Approx(0.2 + oracle::evaluate(g, 0.3, 0.2)).epsilon(1e-14));
}

TEST_CASE("compose, invert and conjugate agree with pointwise evaluation")
{
    std::mt19937_64 rng(13);
    const int N = 16, K = 16;
    const NearIdentityTransform s = symmetric_transform(rng, N, K, 2, 0.05);
    const NearIdentityTransform t = symmetric_transform(rng, N, K, 3, 0.05);
    const NearIdentityTransform st = compose_transforms(s, t);
    const NearIdentityTransform inv = invert_transform(s);
    std::uniform_real_distribution<double> th(0.0, 2 * pi), rr(-0.1, 0.1);
    for (int i = 0; i < 50; ++i) {
        const double x = th(rng), y = rr(rng);
        const auto [a, b] = t(x, y);
        const auto [c, d] = s(a, b);
        const auto [e, f] = st(x, y);
        CHECK(std::abs(c - e) < 1e-12);
        CHECK(std::abs(d - f) < 1e-12);
        const auto [p, q] = s(x, y);
        const auto [bx, by] = inv(p, q);
        CHECK(std::abs(bx - x) < 1e-12);
        CHECK(std::abs(by - y) < 1e-12);
    }

    const Series f = make_series({1.0}, {{1, {0}, 0.4}, {2, {1}, 0.1}}, N, K);
    const ReversibleCylinderMap m{golden, f, Series::zero({1.0}, N, K)};
    const ReversibleCylinderMap c = conjugate(m, s, inv);
    for (int i = 0; i < 50; ++i) {
        const double x = th(rng), y = rr(rng);
        const auto [a, b] = s(x, y);
        const auto [p, q] = m(a, b);
        const auto [u, v] = inv(p, q);
        const auto [cu, cv] = c(x, y);
        CHECK(std::abs(cu - u) < 1e-10);
        CHECK(std::abs(cv - v) < 1e-10);
    }
}

TEST_CASE("synthetic maps are reversible and start at the requested order")
{
    const SyntheticSpec spec{{1.0}, golden, 1e-3, 3, 16, 32};
    const ReversibleCylinderMap m = make_linearizable_map(spec);
    CHECK(m.residual_order() == 3);
    const auto rep = check_reversibility(m, 1e-12);
    CHECK(rep.passes);
    const auto [du, dv] = involution_defect(synthetic_generator(spec));
    CHECK(du < 1e-18);
    CHECK(dv < 1e-18);
    for (double th : {0.2, 2.9}) {
        const auto [ea, er] = pointwise_reversibility(m, th, 0.1);
        CHECK(std::abs(ea) < 1e-13);
        CHECK(std::abs(er) < 1e-13);
    }
}
