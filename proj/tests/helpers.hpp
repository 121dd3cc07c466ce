#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/norms.hpp"

// Shared generators and oracles for the test suites. Oracles are written as
// direct nested loops, independent of the library's level/line machinery.
namespace testutil {

inline double unit_draw(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * unit_draw(eng);
}

inline aniso::TensorGrid random_grid(std::mt19937_64& eng, std::size_t dim,
                                     std::int64_t min_count = 3, std::int64_t max_count = 8) {
    std::vector<double> lo(dim), up(dim);
    std::vector<std::int64_t> counts(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        lo[a] = uniform(eng, -0.5, 0.5);
        up[a] = lo[a] + uniform(eng, 0.8, 2.0);
        counts[a] = min_count + static_cast<std::int64_t>(
                                    eng() % static_cast<std::uint64_t>(max_count - min_count + 1));
    }
    return aniso::build_grid(aniso::BoxDomain(std::move(lo), std::move(up)), std::move(counts));
}

inline aniso::ExponentVector random_exponents(std::mt19937_64& eng, std::size_t dim,
                                              double lo = 1.2, double hi = 4.0) {
    std::vector<double> p(dim);
    for (double& x : p) x = uniform(eng, lo, hi);
    std::sort(p.begin(), p.end());
    return aniso::ExponentVector(std::move(p));
}

inline aniso::FractionalVector random_orders(std::mt19937_64& eng, std::size_t dim,
                                             double lo = 0.3, double hi = 0.9) {
    std::vector<double> s(dim);
    for (double& x : s) x = uniform(eng, lo, hi);
    return aniso::FractionalVector(std::move(s));
}

inline aniso::GridFunction random_field(std::mt19937_64& eng, const aniso::TensorGrid& g,
                                        double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(g.size());
    for (double& x : v) x = uniform(eng, lo, hi);
    return aniso::GridFunction(g, std::move(v));
}

inline double rel_err(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

// random field rescaled to mixed_norm(u, p) = 1
inline aniso::GridFunction normalized_field(std::mt19937_64& eng, const aniso::TensorGrid& g,
                                            const aniso::ExponentVector& p) {
    std::vector<double> v(g.size());
    for (double& x : v) x = uniform(eng, -1.0, 1.0);
    const double nrm = aniso::mixed_norm(aniso::GridFunction(g, v), p);
    for (double& x : v) x /= nrm;
    return aniso::GridFunction(g, std::move(v));
}

// Brute-force mixed norm: materializes the nested sums by explicit recursion
// over multi-indices, no level arrays.
inline double mixed_norm_oracle(const aniso::GridFunction& u, std::span<const double> p) {
    const aniso::TensorGrid& g = u.grid();
    const std::size_t n = g.dim();

    // integrates axis `a` for a fixed multi-index of the axes after it
    std::function<double(std::size_t, std::vector<std::int64_t>&)> level =
        [&](std::size_t a, std::vector<std::int64_t>& idx) -> double {
        double acc = 0.0;
        for (std::int64_t k = 0; k < g.count(a); ++k) {
            idx[a] = k;
            double inner;
            if (a == 0) {
                std::size_t flat = 0;
                for (std::size_t b = 0; b < n; ++b)
                    flat = flat * static_cast<std::size_t>(g.count(b)) +
                           static_cast<std::size_t>(idx[b]);
                inner = std::fabs(u[flat]);
            } else {
                inner = level(a - 1, idx);
            }
            acc += std::pow(inner, p[a]) * g.spacing(a);
        }
        return std::pow(acc, 1.0 / p[a]);
    };

    std::vector<std::int64_t> idx(n, 0);
    return level(n - 1, idx);
}

}  // namespace testutil
