#include <doctest.h>

#include <cmath>
#include <random>

#include "aniso/norms.hpp"
#include "helpers.hpp"

using namespace aniso;

TEST_SUITE_BEGIN("norms");

TEST_CASE("mixed norm: indicator of a sub-box at exact quadrature") {
    // grid on [0,2]x[0,3]; the indicator of [0,1]x[0,1.5] is supported on
    // nodes that tile those boxes exactly, so the rectangle rule is exact
    const TensorGrid g = build_grid(BoxDomain({0.0, 0.0}, {2.0, 3.0}), {7, 5});
    const GridFunction u = sample(
        [](std::span<const double> x) { return (x[0] <= 1.0 + 1e-12 && x[1] <= 1.5 + 1e-12) ? 1.0 : 0.0; },
        g);
    const ExponentVector p({1.5, 2.5});
    const double expected = std::pow(1.0, 1.0 / 1.5) * std::pow(1.5, 1.0 / 2.5);
    CHECK(mixed_norm(u, p) == doctest::Approx(expected).epsilon(1e-13));

    const PartialNormStack stack = mixed_norm_partials(u, p);
    REQUIRE(stack.levels.size() == 2);
    CHECK(stack.levels.back().size() == 1);
    CHECK(stack.value() == doctest::Approx(expected).epsilon(1e-13));
    for (const auto& level : stack.levels)
        for (double v : level) CHECK(v >= 0.0);
}

TEST_CASE("mixed norm factors over separable fields") {
    const TensorGrid g = build_grid(BoxDomain({0.0, 0.0}, {1.0, 2.0}), {9, 6});
    auto f = [](double x) { return std::sin(M_PI * x) + 1.3; };
    auto h = [](double y) { return y * y - y + 0.4; };
    const GridFunction u =
        sample([&](std::span<const double> x) { return f(x[0]) * h(x[1]); }, g);
    const ExponentVector p({1.7, 3.1});

    double nf = 0.0;
    for (std::int64_t k = 1; k <= 9; ++k)
        nf += std::pow(std::fabs(f(g.coordinate(0, k))), 1.7) * g.spacing(0);
    nf = std::pow(nf, 1.0 / 1.7);
    double nh = 0.0;
    for (std::int64_t k = 1; k <= 6; ++k)
        nh += std::pow(std::fabs(h(g.coordinate(1, k))), 3.1) * g.spacing(1);
    nh = std::pow(nh, 1.0 / 3.1);

    CHECK(mixed_norm(u, p) == doctest::Approx(nf * nh).epsilon(1e-13));
}

TEST_CASE("mixed norm against the nested-sum oracle") {
    std::mt19937_64 eng(101);
    for (int round = 0; round < 30; ++round) {
        const std::size_t dim = 1 + round % 3;
        const TensorGrid g = testutil::random_grid(eng, dim);
        const GridFunction u = testutil::random_field(eng, g);
        const ExponentVector p = testutil::random_exponents(eng, dim);
        const double got = mixed_norm(u, p);
        const double want = testutil::mixed_norm_oracle(u, p.span());
        CHECK(testutil::rel_err(got, want) <= 1e-12);
        CHECK(got >= 0.0);
    }
    // zero iff u == 0
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {4});
    CHECK(mixed_norm(GridFunction(g, {0, 0, 0, 0}), ExponentVector({2.0})) == 0.0);
    CHECK(mixed_norm(GridFunction(g, {0, 0, 1e-14, 0}), ExponentVector({2.0})) > 0.0);
    CHECK_THROWS_AS(mixed_norm(GridFunction(g, {1, 1, 1, 1}), ExponentVector({2.0, 2.0})),
                    std::invalid_argument);
}

TEST_CASE("directional norm") {
    const TensorGrid g = build_grid(BoxDomain({0.0, 0.0}, {1.0, 1.0}), {3, 4});
    std::vector<double> z(4 * 4, 0.0);
    CHECK(directional_norm(z, 2.3, g) == 0.0);

    // single staggered value v on one cell of volume V
    z[5] = -1.7;
    const double V = g.cell_volume();
    CHECK(directional_norm(z, 2.3, g) ==
          doctest::Approx(1.7 * std::pow(V, 1.0 / 2.3)).epsilon(1e-13));

    std::mt19937_64 eng(55);
    for (int round = 0; round < 20; ++round) {
        const double p = testutil::uniform(eng, 1.2, 4.0);
        std::vector<double> gg(24);
        for (double& x : gg) x = testutil::uniform(eng, -2.0, 2.0);
        double want = 0.0;
        for (double x : gg) want += std::pow(std::fabs(x), p);
        want = std::pow(want * V, 1.0 / p);
        CHECK(testutil::rel_err(directional_norm(gg, p, g), want) <= 1e-12);
    }
}

TEST_CASE("gradient norm") {
    // 1D hat on [0,1] with one interior node: two cells of slope +-2
    const TensorGrid g1 = build_grid(BoxDomain({0.0}, {1.0}), {1});
    const GridFunction hat(g1, {1.0});
    const ExponentVector p2({2.0});
    CHECK(gradient_norm(hat, p2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(gradient_norm(GridFunction(g1, {0.0}), p2) == 0.0);

    // sampled sine: quotient approaches pi
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {255});
    const GridFunction s =
        sample([](std::span<const double> x) { return std::sin(M_PI * x[0]); }, g);
    const double ratio = gradient_norm(s, p2) / mixed_norm(s, p2);
    CHECK(ratio == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("fractional directional: zero field and window invariance") {
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {15});
    const GridFunction z(g, std::vector<double>(15, 0.0));
    const FractionalTerms t0 = fractional_directional(z, 0.5, 2.0, 0, 0, true);
    CHECK(t0.inner_sum == 0.0);
    CHECK(t0.inner_band == 0.0);
    CHECK(t0.tail == 0.0);
    CHECK(t0.raw_power == 0.0);

    // window below the exact-tail threshold is rejected
    CHECK_THROWS_AS(fractional_directional(z, 0.5, 2.0, 0, 31, true), std::invalid_argument);

    // doubling a large window only moves mass between inner sum and tail
    std::mt19937_64 eng(61);
    const GridFunction u = testutil::random_field(eng, g);
    const FractionalTerms a = fractional_directional(u, 0.5, 2.0, 0, 262144, false);
    const FractionalTerms b = fractional_directional(u, 0.5, 2.0, 0, 524288, false);
    CHECK(b.inner_sum > a.inner_sum);
    CHECK(b.tail < a.tail);
    CHECK(testutil::rel_err(a.raw_power, b.raw_power) <= 1e-10);
    CHECK(a.raw_power == doctest::Approx(a.inner_sum + a.inner_band + a.tail).epsilon(1e-15));
}

TEST_CASE("fractional directional approaches the slope functional as s -> 1") {
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {511});
    const GridFunction u =
        sample([](std::span<const double> x) { return std::sin(M_PI * x[0]); }, g);
    const double p = 2.0;
    const FractionalTerms t = fractional_directional(u, 0.99, p, 0, 0, false);
    const std::vector<double> slope = forward_diff(u, 0);
    const double grad_p = std::pow(directional_norm(slope, p, g), p);
    CHECK((1.0 - 0.99) * t.raw_power ==
          doctest::Approx((2.0 / p) * grad_p).epsilon(0.10));
}

TEST_CASE("fractional seminorm: reflection symmetry") {
    std::mt19937_64 eng(71);
    const TensorGrid g = testutil::random_grid(eng, 2);
    const GridFunction u = testutil::random_field(eng, g);
    const std::size_t axis = eng() % 2;

    // reflect along `axis`
    std::vector<double> rv(u.size());
    std::vector<std::int64_t> idx(2, 0);
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        std::size_t f = 0;
        for (std::size_t b = 0; b < 2; ++b) {
            const std::int64_t kb = (b == axis) ? g.count(b) - 1 - idx[b] : idx[b];
            f = f * static_cast<std::size_t>(g.count(b)) + static_cast<std::size_t>(kb);
        }
        rv[f] = u[flat];
        for (std::size_t b = 2; b-- > 0;) {
            if (++idx[b] < g.count(b)) break;
            idx[b] = 0;
        }
    }
    const GridFunction ur(g, std::move(rv));
    for (std::size_t a = 0; a < 2; ++a) {
        const FractionalTerms t1 = fractional_directional(u, 0.6, 2.4, a, 0, true);
        const FractionalTerms t2 = fractional_directional(ur, 0.6, 2.4, a, 0, true);
        CHECK(testutil::rel_err(t1.raw_power, t2.raw_power) <= 1e-13);
    }
}

TEST_CASE("fractional seminorm: refinement stability on a smooth bump") {
    auto bump = [](std::span<const double> x) {
        const double t = x[0];
        return t * t * (1.0 - t) * (1.0 - t) * 16.0;
    };
    const FractionalVector s({0.5});
    const ExponentVector p({2.0});
    const TensorGrid g1 = build_grid(BoxDomain({0.0}, {1.0}), {127});
    const TensorGrid g2 = build_grid(BoxDomain({0.0}, {1.0}), {255});
    const double a = fractional_seminorm(sample(bump, g1), s, p, 0, true);
    const double b = fractional_seminorm(sample(bump, g2), s, p, 0, true);
    CHECK(testutil::rel_err(a, b) <= 0.02);
}

TEST_CASE("norm axioms: homogeneity and triangle inequality") {
    std::mt19937_64 eng(81);
    for (int round = 0; round < 100; ++round) {
        const std::size_t dim = 1 + round % 2;
        const TensorGrid g = testutil::random_grid(eng, dim);
        const ExponentVector p = testutil::random_exponents(eng, dim);
        const FractionalVector s = testutil::random_orders(eng, dim);
        const GridFunction u = testutil::random_field(eng, g);
        const GridFunction v = testutil::random_field(eng, g);

        for (double t : {-2.0, 0.5, 10.0}) {
            std::vector<double> tv(u.size());
            for (std::size_t i = 0; i < tv.size(); ++i) tv[i] = t * u[i];
            const GridFunction ut(g, std::move(tv));
            CHECK(testutil::rel_err(mixed_norm(ut, p), std::fabs(t) * mixed_norm(u, p)) <= 1e-12);
            CHECK(testutil::rel_err(gradient_norm(ut, p), std::fabs(t) * gradient_norm(u, p)) <=
                  1e-12);
            if (round < 10)
                CHECK(testutil::rel_err(fractional_seminorm(ut, s, p, 0, true),
                                        std::fabs(t) * fractional_seminorm(u, s, p, 0, true)) <=
                      1e-12);
        }

        std::vector<double> sum(u.size());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = u[i] + v[i];
        CHECK(mixed_norm(GridFunction(g, std::move(sum)), p) <=
              mixed_norm(u, p) + mixed_norm(v, p) + 1e-12);
    }
}

TEST_SUITE_END();
