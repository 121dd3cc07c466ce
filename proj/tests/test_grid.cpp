#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "aniso/grid.hpp"
#include "helpers.hpp"

using namespace aniso;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE_BEGIN("grid");

TEST_CASE("build_grid spacings") {
    const TensorGrid g1 = build_grid(BoxDomain({0.0}, {1.0}), {3});
    CHECK(g1.spacing(0) == doctest::Approx(0.25).epsilon(1e-16));
    CHECK(g1.size() == 3);

    const TensorGrid g2 = build_grid(BoxDomain({0.0, 0.0}, {1.0, 1.0}), {63, 63});
    CHECK(g2.spacing(0) == doctest::Approx(1.0 / 64).epsilon(1e-16));
    CHECK(g2.spacing(1) == doctest::Approx(1.0 / 64).epsilon(1e-16));
    CHECK(g2.size() == 63 * 63);

    CHECK_THROWS_AS(build_grid(BoxDomain({0.0}, {1.0}), {0}), std::invalid_argument);
    CHECK_THROWS_AS(BoxDomain({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("sample") {
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {3});
    const GridFunction one = sample([](std::span<const double>) { return 1.0; }, g);
    CHECK(one.values()[0] == 1.0);
    CHECK(one.values()[1] == 1.0);
    CHECK(one.values()[2] == 1.0);

    const GridFunction s = sample(
        [](std::span<const double> x) { return std::sin(M_PI * x[0]); }, g);
    CHECK(s[0] == doctest::Approx(std::sin(M_PI * 0.25)).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[2] == doctest::Approx(std::sin(3 * M_PI * 0.25)).epsilon(1e-15));

    // f = x on the unit square is constant along every y-row
    const TensorGrid g2 = build_grid(BoxDomain({0.0, 0.0}, {1.0, 1.0}), {4, 5});
    const GridFunction fx = sample([](std::span<const double> x) { return x[0]; }, g2);
    for (std::int64_t i = 0; i < 4; ++i)
        for (std::int64_t j = 1; j < 5; ++j)
            CHECK(fx[i * 5 + j] == fx[i * 5]);

    CHECK_THROWS_AS(
        sample([](std::span<const double>) { return std::nan(""); }, g), std::domain_error);
}

TEST_CASE("forward_diff basics") {
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {1});
    const GridFunction u(g, {1.0});
    const std::vector<double> d = forward_diff(u, 0);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(-2.0).epsilon(1e-15));

    const TensorGrid gz = build_grid(BoxDomain({0.0, 0.0}, {1.0, 2.0}), {4, 3});
    const GridFunction z(gz, std::vector<double>(12, 0.0));
    for (double v : forward_diff(z, 0)) CHECK(v == 0.0);
    for (double v : forward_diff(z, 1)) CHECK(v == 0.0);

    // interior samples of f = x reproduce slope 1 away from the boundary
    const TensorGrid gl = build_grid(BoxDomain({0.0}, {1.0}), {7});
    const GridFunction lin = sample([](std::span<const double> x) { return x[0]; }, gl);
    const std::vector<double> dl = forward_diff(lin, 0);
    for (std::size_t k = 1; k < 7; ++k) CHECK(dl[k] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("forward_diff of constant field is supported on the boundary layers") {
    const TensorGrid g = build_grid(BoxDomain({0.0, 0.0}, {1.0, 1.0}), {5, 6});
    const GridFunction one(g, std::vector<double>(30, 1.0));
    for (std::size_t axis = 0; axis < 2; ++axis) {
        const std::vector<double> d = forward_diff(one, axis);
        const std::size_t n = axis == 0 ? 5 : 6;
        const std::size_t st = g.stride(axis);
        const std::size_t lines = g.line_count(axis);
        for (std::size_t l = 0; l < lines; ++l) {
            const std::size_t outer = l / st, inner = l % st;
            const std::size_t base = outer * ((n + 1) * st) + inner;
            for (std::size_t k = 0; k <= n; ++k) {
                const double v = d[base + k * st];
                if (k == 0 || k == n)
                    CHECK(std::fabs(v) > 0.0);
                else
                    CHECK(v == 0.0);
            }
        }
    }
}

TEST_CASE("shift_diff basics") {
    const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {5});
    std::mt19937_64 eng(3);
    const GridFunction u = testutil::random_field(eng, g);

    CHECK_THROWS_AS(shift_diff(u, 0, 0), std::invalid_argument);

    // shift beyond the domain width leaves -u(x) everywhere
    for (const std::int64_t m : {7, -9, 100}) {
        const std::vector<double> d = shift_diff(u, 0, m);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(d[i] == -u[i]);
    }

    // m = 1 matches spacing * forward_diff at matching offsets
    const std::vector<double> d1 = shift_diff(u, 0, 1);
    const std::vector<double> fd = forward_diff(u, 0);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(d1[k] == doctest::Approx(g.spacing(0) * fd[k + 1]).epsilon(1e-14));

    const GridFunction z(g, std::vector<double>(5, 0.0));
    for (double v : shift_diff(z, 0, 2)) CHECK(v == 0.0);
}

TEST_CASE("zero extension against a padded-array oracle") {
    std::mt19937_64 eng(17);
    for (int round = 0; round < 20; ++round) {
        const TensorGrid g = testutil::random_grid(eng, 1 + round % 3);
        const GridFunction u = testutil::random_field(eng, g);
        const std::size_t axis = eng() % g.dim();
        const std::int64_t n = g.count(axis);
        const std::int64_t m =
            (1 + static_cast<std::int64_t>(eng() % (2 * n))) * (eng() % 2 ? 1 : -1);

        // oracle: pad the axis with |m| zeros on both sides, index directly
        const std::vector<double> got = shift_diff(u, axis, m);
        std::vector<std::int64_t> idx(g.dim(), 0);
        for (std::size_t flat = 0; flat < u.size(); ++flat) {
            std::int64_t ks = idx[axis] + m;
            double shifted = 0.0;
            if (ks >= 0 && ks < n) {
                std::size_t f = 0;
                for (std::size_t b = 0; b < g.dim(); ++b) {
                    const std::int64_t kb = (b == axis) ? ks : idx[b];
                    f = f * static_cast<std::size_t>(g.count(b)) + static_cast<std::size_t>(kb);
                }
                shifted = u[f];
            }
            CHECK(got[flat] == shifted - u[flat]);
            for (std::size_t b = g.dim(); b-- > 0;) {
                if (++idx[b] < g.count(b)) break;
                idx[b] = 0;
            }
        }
    }
}

TEST_CASE("field io round trip is bit exact") {
    std::mt19937_64 eng(23);
    const TensorGrid g = build_grid(BoxDomain({-0.25, 0.1}, {1.0, 0.9}), {6, 4});
    std::vector<double> vals(g.size());
    for (double& v : vals) v = testutil::uniform(eng, -5.0, 5.0);
    vals[3] = 1.0 / 3.0;
    vals[5] = -0.0;
    const GridFunction u(g, vals);

    const std::string path = temp_path("aniso_roundtrip.field");
    write_field(u, path);
    const GridFunction v = read_field(path);
    REQUIRE(v.grid() == g);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u[i] == v[i]);
    std::filesystem::remove(path);
}

TEST_CASE("field io parse errors") {
    const std::string path = temp_path("aniso_bad.field");

    {  // empty file
        std::ofstream os(path);
    }
    CHECK_THROWS_AS(read_field(path), ParseError);

    {  // wrong magic
        std::ofstream os(path);
        os << "WRONG 1\n";
    }
    CHECK_THROWS_AS(read_field(path), ParseError);

    {  // header count mismatch: counts promise 3 values, body has 2
        std::ofstream os(path);
        os << "ANISOFIELD 1\ndim 1\ncounts 3\nlower 0\nupper 1\n0.5\n0.5\n";
    }
    try {
        read_field(path);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::dimension);
    }

    {  // non-finite value
        std::ofstream os(path);
        os << "ANISOFIELD 1\ndim 1\ncounts 1\nlower 0\nupper 1\nnan\n";
    }
    CHECK_THROWS_AS(read_field(path), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("row-major flatten/unflatten identity") {
    std::mt19937_64 eng(29);
    const TensorGrid g = testutil::random_grid(eng, 3);
    const GridFunction u = testutil::random_field(eng, g);
    // unflatten to multi-index and back
    std::vector<std::int64_t> idx(3, 0);
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        std::size_t f = 0;
        for (std::size_t b = 0; b < 3; ++b)
            f = f * static_cast<std::size_t>(g.count(b)) + static_cast<std::size_t>(idx[b]);
        CHECK(f == flat);
        for (std::size_t b = 3; b-- > 0;) {
            if (++idx[b] < g.count(b)) break;
            idx[b] = 0;
        }
    }
}

TEST_SUITE_END();
