#include "aniso/variations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aniso/kernels.hpp"
#include "line_ops.hpp"

namespace aniso {

namespace {

void check_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument("grid functions live on different grids");
}

// staggered slope arrays and their directional norms, one per axis
struct DiffData {
    std::vector<std::vector<double>> slope;
    std::vector<double> norm;
};

DiffData diff_data(const GridFunction& u, const ExponentVector& p) {
    DiffData d;
    d.slope.reserve(p.dim());
    d.norm.reserve(p.dim());
    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        d.slope.push_back(forward_diff(u, axis));
        d.norm.push_back(directional_norm(d.slope.back(), p[axis], u.grid()));
    }
    return d;
}

}  // namespace

GridFunction duality_map(const GridFunction& u, const ExponentVector& p) {
    const TensorGrid& g = u.grid();
    if (p.dim() != g.dim())
        throw std::invalid_argument("exponent dimension must match the grid");
    const PartialNormStack stack = mixed_norm_partials(u, p);
    if (stack.value() == 0.0)
        throw std::domain_error("duality map undefined for the zero function");

    const std::size_t n = g.dim();
    // T_a = prod_{b >= a} I_{b+1}^{e_b} broadcast over the trailing axes of
    // level a, built from the innermost scalar outwards. e_a uses p_{n+1} = 1.
    std::vector<double> t{1.0};
    for (std::size_t a = n; a-- > 0;) {
        const std::vector<double>& level = stack.levels[a];
        const double e = (a + 1 < n ? p[a + 1] : 1.0) - p[a];
        std::vector<double> next(level.size());
        const std::size_t rest = t.size();
        const std::size_t c = level.size() / rest;
        for (std::size_t k = 0; k < c; ++k)
            for (std::size_t r = 0; r < rest; ++r)
                next[k * rest + r] = std::pow(level[k * rest + r], e) * t[r];
        t = std::move(next);
    }

    std::vector<double> f(u.size());
    kernels::signed_pow(u.values().data(), u.size(), p[0] - 1.0, f.data());
    const std::size_t rest = t.size();
    const std::size_t lead = u.size() / rest;
    for (std::size_t k = 0; k < lead; ++k)
        for (std::size_t r = 0; r < rest; ++r) f[k * rest + r] *= t[r];
    return GridFunction(g, std::move(f));
}

double pairing(const GridFunction& f, const GridFunction& v) {
    check_same_grid(f, v);
    return kernels::dot(f.values().data(), v.values().data(), f.size()) *
           f.grid().cell_volume();
}

double local_variation_apply(const GridFunction& u, const GridFunction& v,
                             const ExponentVector& p, std::span<const double> weights) {
    check_same_grid(u, v);
    if (p.dim() != u.grid().dim())
        throw std::invalid_argument("exponent dimension must match the grid");
    const double vol = u.grid().cell_volume();
    const DiffData d = diff_data(u, p);

    double total = 0.0;
    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        if (d.norm[axis] == 0.0)
            throw std::domain_error("variation undefined: zero directional norm (u == 0)");
        const double w = weights.empty() ? 1.0 : weights[axis];
        const std::vector<double> h = forward_diff(v, axis);
        std::vector<double> phi(d.slope[axis].size());
        kernels::signed_pow(d.slope[axis].data(), phi.size(), p[axis] - 1.0, phi.data());
        const double form = kernels::dot(phi.data(), h.data(), phi.size()) * vol;
        total += w * form / std::pow(d.norm[axis], p[axis] - 1.0);
    }
    return total;
}

namespace {

// r += scale * adjoint-of-forward_diff applied to phi (staggered, axis layout):
// node k of each line receives (phi_k - phi_{k+1}) / spacing.
void add_staggered_divergence(const TensorGrid& g, std::size_t axis,
                              const std::vector<double>& phi, double scale,
                              std::vector<double>& r) {
    const std::size_t n = static_cast<std::size_t>(g.count(axis));
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const double c = scale / g.spacing(axis);
    for (std::size_t l = 0; l < lines; ++l) {
        const std::size_t outer = l / st;
        const std::size_t inner = l % st;
        const std::size_t stag_base = outer * ((n + 1) * st) + inner;
        const std::size_t node_base = g.line_base(axis, l);
        for (std::size_t k = 0; k < n; ++k)
            r[node_base + k * st] +=
                c * (phi[stag_base + k * st] - phi[stag_base + (k + 1) * st]);
    }
}

}  // namespace

GridFunction local_variation_residual(const GridFunction& u, const ExponentVector& p,
                                      std::span<const double> weights) {
    if (p.dim() != u.grid().dim())
        throw std::invalid_argument("exponent dimension must match the grid");
    const DiffData d = diff_data(u, p);
    std::vector<double> r(u.size(), 0.0);
    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        if (d.norm[axis] == 0.0)
            throw std::domain_error("variation undefined: zero directional norm (u == 0)");
        const double w = weights.empty() ? 1.0 : weights[axis];
        std::vector<double> phi(d.slope[axis].size());
        kernels::signed_pow(d.slope[axis].data(), phi.size(), p[axis] - 1.0, phi.data());
        const double scale = w / std::pow(d.norm[axis], p[axis] - 1.0);
        add_staggered_divergence(u.grid(), axis, phi, scale, r);
    }
    return GridFunction(u.grid(), std::move(r));
}

namespace {

struct FracAxisTerms {
    FractionalTerms terms;
    std::int64_t window;
};

double frac_axis_scale(const FractionalTerms& t, double s, double p, bool normalized) {
    // derivative scale nu * [u]^{1-p} with nu = (1-s) for the normalized
    // seminorm, acting on the unnormalized kernel sums
    const double nu = normalized ? 1.0 - s : 1.0;
    return nu * std::pow(t.seminorm, 1.0 - p);
}

}  // namespace

double fractional_variation_apply(const GridFunction& u, const GridFunction& v,
                                  const FractionalVector& s, const ExponentVector& p,
                                  std::int64_t window, bool normalized) {
    check_same_grid(u, v);
    if (s.dim() != u.grid().dim() || p.dim() != u.grid().dim())
        throw std::invalid_argument("parameter dimensions must match the grid");
    const TensorGrid& g = u.grid();
    const double vol = g.cell_volume();

    double total = 0.0;
    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        const FractionalTerms t =
            fractional_directional(u, s[axis], p[axis], axis, window, normalized);
        if (t.raw_power == 0.0)
            throw std::domain_error("variation undefined: zero directional seminorm (u == 0)");
        const double pi = p[axis];
        const double si = s[axis];
        const std::int64_t M = window == 0 ? exact_tail_window(g, axis) : window;
        const double d = g.spacing(axis);
        const double sp = si * pi;

        const std::vector<double> w = detail::shift_weights(d, sp, M);
        double bracket = detail::frac_form(u, v, axis, w, pi - 1.0) * vol;

        // band part: same staggered form as the local operator
        const std::vector<double> gu = forward_diff(u, axis);
        const std::vector<double> gv = forward_diff(v, axis);
        std::vector<double> phi(gu.size());
        kernels::signed_pow(gu.data(), gu.size(), pi - 1.0, phi.data());
        const double band_coef = 2.0 * std::pow(d, pi * (1.0 - si)) / (pi * (1.0 - si));
        bracket += band_coef * kernels::dot(phi.data(), gv.data(), phi.size()) * vol;

        // tail part: diagonal in u
        const double tail_coef = 2.0 * std::pow(static_cast<double>(M) * d, -sp) / sp;
        std::vector<double> phiu(u.size());
        kernels::signed_pow(u.values().data(), u.size(), pi - 1.0, phiu.data());
        bracket += tail_coef * kernels::dot(phiu.data(), v.values().data(), u.size()) * vol;

        total += frac_axis_scale(t, si, pi, normalized) * bracket;
    }
    return total;
}

GridFunction fractional_variation_residual(const GridFunction& u, const FractionalVector& s,
                                           const ExponentVector& p, std::int64_t window,
                                           bool normalized) {
    if (s.dim() != u.grid().dim() || p.dim() != u.grid().dim())
        throw std::invalid_argument("parameter dimensions must match the grid");
    const TensorGrid& g = u.grid();
    std::vector<double> r(u.size(), 0.0);

    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        const FractionalTerms t =
            fractional_directional(u, s[axis], p[axis], axis, window, normalized);
        if (t.raw_power == 0.0)
            throw std::domain_error("variation undefined: zero directional seminorm (u == 0)");
        const double pi = p[axis];
        const double si = s[axis];
        const std::int64_t M = window == 0 ? exact_tail_window(g, axis) : window;
        const double d = g.spacing(axis);
        const double sp = si * pi;
        const double scale = frac_axis_scale(t, si, pi, normalized);

        const std::vector<double> w = detail::shift_weights(d, sp, M);
        detail::frac_flux(u, axis, w, pi - 1.0, scale, r);

        const std::vector<double> gu = forward_diff(u, axis);
        std::vector<double> phi(gu.size());
        kernels::signed_pow(gu.data(), gu.size(), pi - 1.0, phi.data());
        const double band_coef = 2.0 * std::pow(d, pi * (1.0 - si)) / (pi * (1.0 - si));
        add_staggered_divergence(g, axis, phi, scale * band_coef, r);

        const double tail_coef = 2.0 * std::pow(static_cast<double>(M) * d, -sp) / sp;
        std::vector<double> phiu(u.size());
        kernels::signed_pow(u.values().data(), u.size(), pi - 1.0, phiu.data());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += scale * tail_coef * phiu[i];
    }
    return GridFunction(g, std::move(r));
}

GateauxReport gateaux_check(const std::function<double(const GridFunction&)>& J,
                            const std::function<double(const GridFunction&, const GridFunction&)>&
                                derivative,
                            const GridFunction& u, const GridFunction& v,
                            std::span<const double> steps) {
    static constexpr double kDefaultSteps[] = {1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6};
    if (steps.empty()) steps = kDefaultSteps;

    const double predicted = derivative(u, v);
    const double scale = std::max(std::fabs(predicted), 1e-300);

    GateauxReport rep;
    rep.best_rel_error = std::numeric_limits<double>::infinity();
    const TensorGrid& g = u.grid();
    std::vector<double> work(u.size());
    for (double t : steps) {
        for (std::size_t i = 0; i < work.size(); ++i) work[i] = u[i] + t * v[i];
        const double jp = J(GridFunction(g, work));
        for (std::size_t i = 0; i < work.size(); ++i) work[i] = u[i] - t * v[i];
        const double jm = J(GridFunction(g, work));
        const double central = (jp - jm) / (2.0 * t);
        const double rel = std::fabs(central - predicted) / scale;
        rep.sweep.emplace_back(t, rel);
        if (rel < rep.best_rel_error) {
            rep.best_rel_error = rel;
            rep.best_step = t;
        }
    }
    return rep;
}

}  // namespace aniso
