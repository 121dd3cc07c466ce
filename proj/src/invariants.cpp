#include "aniso/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aniso/eigensolver.hpp"
#include "aniso/norms.hpp"
#include "aniso/variations.hpp"

namespace aniso {

namespace {

double unit_draw(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1p-53;
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * unit_draw(eng);
}

TensorGrid random_grid(std::mt19937_64& eng, std::size_t dim) {
    std::vector<double> lo(dim), up(dim);
    std::vector<std::int64_t> counts(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        lo[a] = uniform(eng, -0.5, 0.5);
        up[a] = lo[a] + uniform(eng, 0.8, 2.0);
        counts[a] = 3 + static_cast<std::int64_t>(eng() % 6);
    }
    return build_grid(BoxDomain(std::move(lo), std::move(up)), std::move(counts));
}

ExponentVector random_exponents(std::mt19937_64& eng, std::size_t dim, double lo = 1.2,
                                double hi = 4.0) {
    std::vector<double> p(dim);
    for (double& x : p) x = uniform(eng, lo, hi);
    std::sort(p.begin(), p.end());
    return ExponentVector(std::move(p));
}

FractionalVector random_orders(std::mt19937_64& eng, std::size_t dim) {
    std::vector<double> s(dim);
    for (double& x : s) x = uniform(eng, 0.3, 0.9);
    return FractionalVector(std::move(s));
}

GridFunction random_field(std::mt19937_64& eng, const TensorGrid& g, double lo = -1.0,
                          double hi = 1.0) {
    std::vector<double> v(g.size());
    for (double& x : v) x = uniform(eng, lo, hi);
    return GridFunction(g, std::move(v));
}

double rel_err(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed) {
    std::vector<InvariantResult> out;
    auto max_row = [&](const std::string& name, double statistic, double threshold) {
        out.push_back({name, statistic, threshold, statistic <= threshold});
    };
    auto min_row = [&](const std::string& name, double statistic, double threshold) {
        out.push_back({name, statistic, threshold, statistic >= threshold});
    };

    // duality identity and Euler identity of the mixed norm
    {
        std::mt19937_64 eng(seed ^ 0x1001);
        double worst_dual = 0.0, worst_euler = 0.0, worst_odd = 0.0;
        for (int k = 0; k < 50; ++k) {
            const std::size_t dim = 1 + k % 3;
            const TensorGrid g = random_grid(eng, dim);
            const ExponentVector p = random_exponents(eng, dim);
            GridFunction u = random_field(eng, g);
            {
                std::vector<double> v(u.values().begin(), u.values().end());
                const double nrm = mixed_norm(u, p);
                for (double& x : v) x /= nrm;
                u = GridFunction(g, std::move(v));
            }
            const GridFunction f = duality_map(u, p);
            const double nu = mixed_norm(u, p);
            worst_dual = std::max(
                worst_dual, rel_err(mixed_norm(f, std::span<const double>(p.conjugate())), nu));
            worst_euler = std::max(worst_euler, rel_err(pairing(f, u), nu));

            std::vector<double> neg(u.size());
            for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -u[i];
            const GridFunction fneg = duality_map(GridFunction(g, std::move(neg)), p);
            double odd = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                odd = std::max(odd, std::fabs(fneg[i] + f[i]));
                scale = std::max(scale, std::fabs(f[i]));
            }
            worst_odd = std::max(worst_odd, odd / std::max(scale, 1e-300));
        }
        max_row("duality_identity", worst_dual, 1e-10);
        max_row("euler_mixed", worst_euler, 1e-10);
        max_row("duality_map_odd", worst_odd, 1e-13);
    }

    // Euler identity, boundedness, monotonicity and adjoint of the local form
    {
        std::mt19937_64 eng(seed ^ 0x2002);
        double worst_euler = 0.0, worst_bound = -1e300, worst_mono = 1e300, worst_adj = 0.0;
        for (int k = 0; k < 100; ++k) {
            const std::size_t dim = 1 + k % 3;
            const TensorGrid g = random_grid(eng, dim);
            const ExponentVector p = random_exponents(eng, dim);
            const GridFunction u = random_field(eng, g);
            const GridFunction v = random_field(eng, g);
            const double h = gradient_norm(u, p);
            worst_euler = std::max(worst_euler, rel_err(local_variation_apply(u, u, p), h));
            worst_bound = std::max(worst_bound, std::fabs(local_variation_apply(u, v, p)) -
                                                    gradient_norm(v, p));
            const double uv = local_variation_apply(u, v, p);
            std::vector<double> dvals(u.size());
            for (std::size_t i = 0; i < dvals.size(); ++i) dvals[i] = u[i] - v[i];
            const GridFunction d(g, std::move(dvals));
            worst_mono = std::min(worst_mono,
                                  local_variation_apply(u, d, p) - local_variation_apply(v, d, p));
            if (k < 20) {
                const GridFunction r = local_variation_residual(u, p);
                worst_adj = std::max(worst_adj, rel_err(pairing(r, v), uv));
            }
        }
        max_row("local_euler", worst_euler, 1e-10);
        max_row("local_boundedness", worst_bound, 1e-10);
        min_row("local_monotonicity", worst_mono, -1e-12);
        max_row("local_adjoint", worst_adj, 1e-12);
    }

    // fractional Euler identity, Hoelder bound and adjoint
    {
        std::mt19937_64 eng(seed ^ 0x3003);
        double worst_euler = 0.0, worst_bound = -1e300, worst_adj = 0.0;
        for (int k = 0; k < 20; ++k) {
            const std::size_t dim = 1 + k % 2;
            const TensorGrid g = random_grid(eng, dim);
            const ExponentVector p = random_exponents(eng, dim);
            const FractionalVector s = random_orders(eng, dim);
            const bool normalized = (k % 2) == 0;
            const GridFunction u = random_field(eng, g);
            const GridFunction v = random_field(eng, g);
            const double hs = fractional_seminorm(u, s, p, 0, normalized);
            worst_euler = std::max(
                worst_euler, rel_err(fractional_variation_apply(u, u, s, p, 0, normalized), hs));
            worst_bound =
                std::max(worst_bound, std::fabs(fractional_variation_apply(u, v, s, p, 0, normalized)) -
                                          fractional_seminorm(v, s, p, 0, normalized));
            const GridFunction r = fractional_variation_residual(u, s, p, 0, normalized);
            worst_adj = std::max(
                worst_adj, rel_err(pairing(r, v), fractional_variation_apply(u, v, s, p, 0, normalized)));
        }
        max_row("fractional_euler", worst_euler, 1e-10);
        max_row("fractional_boundedness", worst_bound, 1e-10);
        max_row("fractional_adjoint", worst_adj, 1e-12);
    }

    // Gateaux derivatives against central differences
    {
        std::mt19937_64 eng(seed ^ 0x4004);
        double worst_i = 0.0, worst_h = 0.0, worst_hs = 0.0;
        for (int k = 0; k < 10; ++k) {
            const std::size_t dim = 1 + k % 2;
            const TensorGrid g = random_grid(eng, dim);
            const ExponentVector p = random_exponents(eng, dim);
            const FractionalVector s = random_orders(eng, dim);
            const GridFunction u = random_field(eng, g, 0.2, 1.2);
            const GridFunction v = random_field(eng, g);
            worst_i = std::max(
                worst_i, gateaux_check([&](const GridFunction& x) { return mixed_norm(x, p); },
                                       [&](const GridFunction& x, const GridFunction& d) {
                                           return pairing(duality_map(x, p), d);
                                       },
                                       u, v)
                             .best_rel_error);
            worst_h = std::max(
                worst_h, gateaux_check([&](const GridFunction& x) { return gradient_norm(x, p); },
                                       [&](const GridFunction& x, const GridFunction& d) {
                                           return local_variation_apply(x, d, p);
                                       },
                                       u, v)
                             .best_rel_error);
            worst_hs = std::max(
                worst_hs,
                gateaux_check(
                    [&](const GridFunction& x) { return fractional_seminorm(x, s, p, 0, true); },
                    [&](const GridFunction& x, const GridFunction& d) {
                        return fractional_variation_apply(x, d, s, p, 0, true);
                    },
                    u, v)
                    .best_rel_error);
        }
        max_row("gateaux_mixed", worst_i, 1e-5);
        max_row("gateaux_local", worst_h, 1e-5);
        max_row("gateaux_fractional", worst_hs, 1e-4);
    }

    // norm axioms: homogeneity, triangle inequality; window invariance
    {
        std::mt19937_64 eng(seed ^ 0x5005);
        double worst_hom = 0.0, worst_tri = 1e300;
        static constexpr double kScales[] = {-2.0, 0.5, 10.0};
        for (int k = 0; k < 100; ++k) {
            const std::size_t dim = 1 + k % 3;
            const TensorGrid g = random_grid(eng, dim);
            const ExponentVector p = random_exponents(eng, dim);
            const FractionalVector s = random_orders(eng, dim);
            const GridFunction u = random_field(eng, g);
            const GridFunction v = random_field(eng, g);
            const double nu = mixed_norm(u, p);
            const double hu = gradient_norm(u, p);
            const double fu = (k < 20) ? fractional_seminorm(u, s, p, 0, true) : 0.0;
            for (double t : kScales) {
                std::vector<double> tv(u.size());
                for (std::size_t i = 0; i < tv.size(); ++i) tv[i] = t * u[i];
                const GridFunction ut(g, std::move(tv));
                worst_hom = std::max(worst_hom, rel_err(mixed_norm(ut, p), std::fabs(t) * nu));
                worst_hom = std::max(worst_hom, rel_err(gradient_norm(ut, p), std::fabs(t) * hu));
                if (k < 20)
                    worst_hom = std::max(
                        worst_hom, rel_err(fractional_seminorm(ut, s, p, 0, true), std::fabs(t) * fu));
            }
            std::vector<double> sum(u.size());
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = u[i] + v[i];
            worst_tri =
                std::min(worst_tri, nu + mixed_norm(v, p) - mixed_norm(GridFunction(g, sum), p));
        }
        max_row("homogeneity", worst_hom, 1e-12);
        min_row("mixed_triangle", worst_tri, -1e-12);

        const TensorGrid g1 = build_grid(BoxDomain({0.0}, {1.0}), {15});
        const GridFunction bump = sample(
            [](std::span<const double> x) {
                const double t = x[0];
                return t * (1.0 - t) * std::exp(-3.0 * t);
            },
            g1);
        const double a = fractional_directional(bump, 0.5, 2.0, 0, 262144, false).raw_power;
        const double b = fractional_directional(bump, 0.5, 2.0, 0, 524288, false).raw_power;
        max_row("window_invariance", rel_err(a, b), 1e-10);
    }

    // discrete Poincare consistency against the computed first eigenvalue
    {
        std::mt19937_64 eng(seed ^ 0x6006);
        const TensorGrid g = build_grid(BoxDomain({0.0}, {1.0}), {31});
        const ExponentVector p(std::vector<double>{2.0});
        SolveConfig cfg;
        cfg.restarts = 2;
        cfg.rng_seed = seed;
        const SolveReport rep = minimize_local(p, g, cfg);
        double min_slack = 1e300;
        for (int k = 0; k < 200; ++k) {
            const GridFunction u = random_field(eng, g);
            min_slack = std::min(min_slack, rayleigh_local(u, p) - rep.lambda);
        }
        min_row("poincare_consistency", min_slack, -1e-6);
    }

    return out;
}

}  // namespace aniso
