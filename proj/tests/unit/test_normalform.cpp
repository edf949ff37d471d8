#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "normkam/errors.hpp"
#include "normkam/homological.hpp"
#include "normkam/normalform.hpp"
#include "oracles.hpp"

using namespace normkam;
using std::numbers::pi;

namespace {

const double golden = pi * (std::sqrt(5.0) - 1.0);
const DiophantineParams dioph{{1.0}, golden, 0.38, 1.0, 32};

// Largest |M(T(x)) - T(M'(x))| over random points, every map evaluated
// through the direct-sum oracle.
double conjugacy_defect(const ReversibleCylinderMap& m, const NearIdentityTransform& t,
                        const ReversibleCylinderMap& mp, double rho, int points, std::uint64_t seed)
{
    auto map = [](const ReversibleCylinderMap& x, double a, double b) {
        return std::pair{a + x.gamma0 + oracle::evaluate(x.f, a, b), b + oracle::evaluate(x.g, a, b)};
    };
    auto tr = [&](double a, double b) {
        return std::pair{a + oracle::evaluate(t.u, a, b), b + oracle::evaluate(t.v, a, b)};
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> th(0.0, 2 * pi), rr(-rho, rho);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double a = th(rng), b = rr(rng);
        const auto [x1, y1] = tr(a, b);
        const auto [x2, y2] = map(m, x1, y1);
        const auto [x3, y3] = map(mp, a, b);
        const auto [x4, y4] = tr(x3, y3);
        worst = std::max({worst, std::abs(x2 - x4), std::abs(y2 - y4)});
    }
    return worst;
}

}  // namespace

TEST_CASE("schedule sequences")
{
    const KamSchedule s;
    CHECK(s.s(0) == 3);
    CHECK(s.s(1) == 5);
    CHECK(s.s(3) == 17);
    CHECK(s.t(0) == doctest::Approx(0.5));
    CHECK(s.rho(0) == doctest::Approx(0.5));
    CHECK(s.t(100) == doctest::Approx(0.25));
    CHECK(s.d(1) == doctest::Approx(std::pow(1e-3, 4.0 / 3.0)));
    CHECK(s.d(2) == doctest::Approx(1.5 * std::pow(s.d(1), 4.0 / 3.0)));
    KamSchedule bad;
    bad.rho0 = 1.5;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("kam_step leaves the rigid rotation alone")
{
    const Series z = Series::zero({1.0}, 8, 8);
    const auto res = kam_step({golden, z, z}, 3, dioph);
    CHECK(res.map.f.is_zero());
    CHECK(res.map.g.is_zero());
    CHECK(res.transform.u.is_zero());
    CHECK(res.transform.v.is_zero());
}

TEST_CASE("one step doubles the order of the synthetic s = 3 map")
{
    const double eps = 1e-3;
    const ReversibleCylinderMap m = make_linearizable_map({{1.0}, golden, eps, 3, 16, 32});
    const auto res = kam_step(m, 3, dioph);
    CHECK(max_abs_coeff(res.map.f, 3, 4) <= 1e-10 * eps);
    CHECK(max_abs_coeff(res.map.g, 3, 4) <= 1e-10 * eps);
    CHECK(res.map.residual_order().value_or(99) >= 5);
    CHECK(res.report.order_out >= 5);

    // transform commutes with G coefficient-exactly
    CHECK(oracle::max_diff(reflect_angle(res.transform.u), -1.0 * res.transform.u) == 0.0);
    CHECK(oracle::max_diff(reflect_angle(res.transform.v), res.transform.v) == 0.0);

    // the new map is the conjugate, checked pointwise
    CHECK(conjugacy_defect(m, res.transform, res.map, 0.1, 200, 1) <= 1e-9);
    CHECK(res.report.reversibility_out <= 1e-10);
}

TEST_CASE("planted order-3 twist is reported as an obstruction")
{
    const double delta = 1e-4;
    const ReversibleCylinderMap m = make_obstructed_map({{1.0}, golden, 1e-3, 3, 16, 32}, delta, 3);
    double value = 0.0;
    int order = 0;
    try {
        kam_step(m, 3, dioph);
    } catch (const ObstructionDetected& e) {
        value = e.value();
        order = e.order();
    }
    CHECK(order == 3);
    CHECK(std::abs(value - delta) <= 0.01 * delta);

    // the reported value is the theta-mean of the symmetrized truncation
    const Series p = truncate_orders(0.5 * (m.f + reflect_about(m.f, golden)), 3, 4);
    CHECK(std::abs(value - p.coeff(3, {0}).real()) <= 1e-12);
}

TEST_CASE("kam_step rejects inputs below the requested order")
{
    const ReversibleCylinderMap m = make_linearizable_map({{1.0}, golden, 1e-3, 3, 12, 16});
    CHECK_THROWS_AS(kam_step(m, 5, dioph), OrderDoublingFailure);
    CHECK_THROWS(kam_step(m, 1, dioph));
}

TEST_CASE("kam_iterate: rigid rotation converges immediately")
{
    const Series z = Series::zero({1.0}, 8, 8);
    const auto res = kam_iterate({golden, z, z}, {}, dioph);
    CHECK(res.stop == StopReason::Converged);
    CHECK(res.transform.u.is_zero());
    CHECK(res.transform.v.is_zero());
    CHECK(to_string(res.stop) == "converged");
}

TEST_CASE("kam_iterate: four steps on the s = 3 map reach order 33 with fast decay")
{
    const ReversibleCylinderMap m = make_linearizable_map({{1.0}, golden, 1e-3, 3, 70, 32});
    KamSchedule sched;
    sched.n_max = 4;
    const auto res = kam_iterate(m, sched, dioph);
    REQUIRE(res.reports.size() == 4);
    CHECK(res.map.residual_order().value_or(1000) >= 33);
    for (const auto& r : res.reports) {
        CHECK(r.order_out >= 2 * r.order_in - 1);
        CHECK(r.reversibility_out <= 1e-10);
    }
    const auto slope = fit_decay_exponent(res.decay);
    REQUIRE(slope.has_value());
    CHECK(*slope >= 1.3);
    CHECK(conjugacy_defect(m, res.transform, res.map, 0.1, 200, 2) <= 1e-9);
}

TEST_CASE("kam_iterate halts on a planted order-5 obstruction at the second step")
{
    const ReversibleCylinderMap m = make_obstructed_map({{1.0}, golden, 1e-3, 3, 24, 32}, 1e-4, 5);
    const auto res = kam_iterate(m, {}, dioph);
    CHECK(res.stop == StopReason::Obstruction);
    REQUIRE(res.obstruction.has_value());
    CHECK(res.obstruction->step == 1);
    CHECK(res.obstruction->order == 5);
    CHECK(res.obstruction->value == doctest::Approx(1e-4).epsilon(0.01));
}

TEST_CASE("fit_decay_exponent")
{
    CHECK_FALSE(fit_decay_exponent({1e-3}).has_value());
    const std::vector<double> d{1e-2, 1e-4, 1e-8, 1e-16};
    CHECK(*fit_decay_exponent(d) == doctest::Approx(2.0));
}

TEST_CASE("birkhoff_reduce: rigid rotation and a pure twist")
{
    const Series z = Series::zero({1.0}, 8, 8);
    const auto rigid = birkhoff_reduce({golden, z, z}, 6, dioph);
    for (double g : rigid.gammas) {
        CHECK(g == 0.0);
    }
    CHECK(rigid.transform.u.is_zero());
    CHECK(rigid.transform.v.is_zero());

    const Series r = make_series({1.0}, {{1, {0}, 1.0}}, 8, 8);
    const auto tw = birkhoff_reduce({golden, r, z}, 6, dioph);
    REQUIRE(tw.gammas.size() >= 3);
    CHECK(tw.gammas[0] == doctest::Approx(1.0));
    CHECK(tw.gammas[1] == 0.0);
    CHECK(tw.gammas[2] == 0.0);
    CHECK(tw.transform.u.is_zero());
    CHECK(tw.transform.v.is_zero());
}

TEST_CASE("birkhoff_reduce: (1 + cos theta) r keeps gamma_1 = 1 and absorbs the rest")
{
    const double g0 = std::sqrt(2.0);
    const int N = 8;
    const Series f = make_series({1.0}, {{1, {0}, 1.0}, {1, {1}, 0.5}}, N, 16);
    const Series z = Series::zero({1.0}, N, 16);
    const ReversibleCylinderMap m{g0, f, z};
    BirkhoffOptions opt;
    opt.symmetrize_generators = false;
    const auto res = birkhoff_reduce(m, 2, {{1.0}, g0, 1e-3, 1.0, 16}, opt);
    CHECK(res.gammas[0] == doctest::Approx(1.0).epsilon(1e-14));
    // order-1 part of the reduced map is exactly gamma_1 r
    CHECK(std::abs(res.map.f.coeff(1, {0}) - 1.0) < 1e-14);
    CHECK(max_abs_coeff(res.map.f - make_series({1.0}, {{1, {0}, 1.0}}, N, 16), 0, 1) < 1e-14);
    CHECK(max_abs_coeff(res.map.g, 0, 1) < 1e-14);
    CHECK(res.residual_order.value_or(N + 1) >= 2);

    // quadrature mean of the angular advance at order 1
    double mean = 0.0;
    for (int i = 0; i < 64; ++i) {
        mean += 1.0 + std::cos(2 * pi * i / 64);
    }
    CHECK(res.gammas[0] == doctest::Approx(mean / 64).epsilon(1e-14));
}

TEST_CASE("gamma_1 is invariant under G-commuting pre-conjugation")
{
    const int N = 10, K = 16;
    const Series twist = make_series({1.0}, {{1, {0}, 0.7}, {2, {0}, -0.2}}, N, K);
    const Series z = Series::zero({1.0}, N, K);
    const ReversibleCylinderMap normal{golden, twist, z};
    const DiophantineParams d{{1.0}, golden, 0.38, 1.0, K};
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 4; ++trial) {
        const Series a = oracle::random_series(rng, {1.0}, N, 3, 2, 4);
        const Series b = oracle::random_series(rng, {1.0}, N, 3, 2, 4);
        const NearIdentityTransform t{0.05 * odd_part(oracle::from_table(oracle::table(a), {1.0}, N, K)),
                                      0.05 * even_part(oracle::from_table(oracle::table(b), {1.0}, N, K))};
        const ReversibleCylinderMap m = conjugate(normal, t, invert_transform(t));
        const auto res = birkhoff_reduce(m, 3, d);
        CHECK(res.gammas[0] == doctest::Approx(0.7).epsilon(1e-12));
    }
}
