#include "aniso/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aniso/kernels.hpp"
#include "line_ops.hpp"

namespace aniso {

namespace {

void check_exponents(const GridFunction& u, std::span<const double> p) {
    if (p.size() != u.grid().dim())
        throw std::invalid_argument("exponent dimension must match the grid");
    for (double pi : p)
        if (!(pi > 1.0) || !std::isfinite(pi))
            throw std::invalid_argument("exponents must satisfy 1 < p < inf");
}

// Runs the level recursion; when `stack` is non-null every level is kept.
double mixed_norm_impl(const GridFunction& u, std::span<const double> p,
                       PartialNormStack* stack) {
    check_exponents(u, p);
    const TensorGrid& g = u.grid();
    const std::size_t n = g.dim();

    std::vector<double> cur(u.values().begin(), u.values().end());
    for (std::size_t axis = 0; axis < n; ++axis) {
        // `cur` spans axes axis..n-1; integrate the leading (slowest) one
        const std::size_t c = static_cast<std::size_t>(g.count(axis));
        const std::size_t slab = cur.size() / c;
        std::vector<double> acc(slab, 0.0);
        for (std::size_t k = 0; k < c; ++k)
            kernels::accum_abs_pow(cur.data() + k * slab, slab, p[axis], acc.data());
        const double d = g.spacing(axis);
        const double inv_p = 1.0 / p[axis];
        for (std::size_t i = 0; i < slab; ++i) acc[i] = std::pow(acc[i] * d, inv_p);
        cur = std::move(acc);
        if (stack) stack->levels.push_back(cur);
    }
    return cur.front();
}

}  // namespace

double mixed_norm(const GridFunction& u, std::span<const double> p) {
    return mixed_norm_impl(u, p, nullptr);
}

double mixed_norm(const GridFunction& u, const ExponentVector& p) {
    return mixed_norm_impl(u, p.span(), nullptr);
}

PartialNormStack mixed_norm_partials(const GridFunction& u, std::span<const double> p) {
    PartialNormStack stack;
    stack.levels.reserve(u.grid().dim());
    mixed_norm_impl(u, p, &stack);
    return stack;
}

PartialNormStack mixed_norm_partials(const GridFunction& u, const ExponentVector& p) {
    return mixed_norm_partials(u, p.span());
}

double directional_norm(std::span<const double> g, double p, const TensorGrid& grid) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("exponents must satisfy 1 < p < inf");
    const double s = kernels::sum_abs_pow(g.data(), g.size(), p);
    return std::pow(s * grid.cell_volume(), 1.0 / p);
}

double gradient_norm(const GridFunction& u, const ExponentVector& p) {
    return gradient_norm(u, p, {});
}

double gradient_norm(const GridFunction& u, const ExponentVector& p,
                     std::span<const double> weights) {
    if (p.dim() != u.grid().dim())
        throw std::invalid_argument("exponent dimension must match the grid");
    if (!weights.empty() && weights.size() != p.dim())
        throw std::invalid_argument("weight dimension must match the grid");
    double total = 0.0;
    for (std::size_t axis = 0; axis < p.dim(); ++axis) {
        const std::vector<double> g = forward_diff(u, axis);
        const double w = weights.empty() ? 1.0 : weights[axis];
        total += w * directional_norm(g, p[axis], u.grid());
    }
    return total;
}

std::int64_t exact_tail_window(const TensorGrid& grid, std::size_t axis) {
    if (axis >= grid.dim()) throw std::invalid_argument("axis out of range");
    return 2 * (grid.count(axis) + 1);
}

namespace {

struct FracAxisParams {
    double s, p, sp, d;
    std::int64_t window;
    std::vector<double> weights;  // shift kernel weights
    double band_coef;             // 2 d^{p(1-s)} / (p(1-s))
    double tail_coef;             // 2 (M d)^{-sp} / (sp)
};

FracAxisParams frac_axis_params(const TensorGrid& grid, double s, double p, std::size_t axis,
                                std::int64_t window) {
    if (axis >= grid.dim()) throw std::invalid_argument("axis out of range");
    if (!(s > 0.0) || !(s < 1.0))
        throw std::invalid_argument("fractional order must satisfy 0 < s < 1");
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("exponents must satisfy 1 < p < inf");
    FracAxisParams a;
    a.s = s;
    a.p = p;
    a.sp = s * p;
    if (a.sp <= std::numeric_limits<double>::min())
        throw std::invalid_argument("s*p is numerically zero");
    a.d = grid.spacing(axis);
    a.window = window == 0 ? exact_tail_window(grid, axis) : window;
    if (a.window < exact_tail_window(grid, axis))
        throw std::invalid_argument(
            "window too small for the exact tail: need M*spacing >= 2*extent");
    a.weights = detail::shift_weights(a.d, a.sp, a.window);
    a.band_coef = 2.0 * std::pow(a.d, p * (1.0 - s)) / (p * (1.0 - s));
    a.tail_coef =
        2.0 * std::pow(static_cast<double>(a.window) * a.d, -a.sp) / a.sp;
    return a;
}

}  // namespace

FractionalTerms fractional_directional(const GridFunction& u, double s, double p,
                                       std::size_t axis, std::int64_t window, bool normalized) {
    const TensorGrid& g = u.grid();
    const FracAxisParams a = frac_axis_params(g, s, p, axis, window);
    const double vol = g.cell_volume();

    FractionalTerms t;
    t.normalized = normalized;
    t.inner_sum = detail::frac_energy(u, axis, a.weights, p) * vol;

    const std::vector<double> slope = forward_diff(u, axis);
    t.inner_band = kernels::sum_abs_pow(slope.data(), slope.size(), p) * vol * a.band_coef;

    t.tail =
        kernels::sum_abs_pow(u.values().data(), u.size(), p) * vol * a.tail_coef;

    if (normalized) {
        const double nu = 1.0 - s;
        t.inner_sum *= nu;
        t.inner_band *= nu;
        t.tail *= nu;
    }
    t.raw_power = t.inner_sum + t.inner_band + t.tail;
    t.seminorm = std::pow(t.raw_power, 1.0 / p);
    return t;
}

double fractional_seminorm(const GridFunction& u, const FractionalVector& s,
                           const ExponentVector& p, std::int64_t window, bool normalized) {
    if (s.dim() != u.grid().dim() || p.dim() != u.grid().dim())
        throw std::invalid_argument("parameter dimensions must match the grid");
    double total = 0.0;
    for (std::size_t axis = 0; axis < p.dim(); ++axis)
        total += fractional_directional(u, s[axis], p[axis], axis, window, normalized).seminorm;
    return total;
}

}  // namespace aniso
