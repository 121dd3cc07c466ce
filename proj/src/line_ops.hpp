#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/kernels.hpp"
#include "aniso/parallel.hpp"

// Internal line-based driver loops for the fractional shift sums. All three
// walk the grid lines along one axis and combine the shifts m = 1..M with
// weights w[m-1]; the decomposition into parallel blocks is fixed (per line,
// or per m-block when there is a single line) so results are bit-stable
// across thread counts.
namespace aniso::detail {

inline void gather(const double* v, std::size_t base, std::size_t st, std::size_t n,
                   double* buf) {
    if (st == 1) {
        std::memcpy(buf, v + base, n * sizeof(double));
    } else {
        for (std::size_t k = 0; k < n; ++k) buf[k] = v[base + k * st];
    }
}

constexpr std::int64_t kShiftBlock = 32;

// rectangle-rule kernel weights d / (m d)^{1+sp} for m = 1..M
inline std::vector<double> shift_weights(double d, double sp, std::int64_t M) {
    std::vector<double> w(static_cast<std::size_t>(M));
    for (std::int64_t m = 1; m <= M; ++m)
        w[static_cast<std::size_t>(m - 1)] =
            d / std::pow(static_cast<double>(m) * d, 1.0 + sp);
    return w;
}

// sum over lines and shifts of w[m-1] * diff_pair_energy(line, m, p)
inline double frac_energy(const GridFunction& u, std::size_t axis, std::span<const double> w,
                          double p) {
    const TensorGrid& g = u.grid();
    const std::size_t n = static_cast<std::size_t>(g.count(axis));
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const std::int64_t M = static_cast<std::int64_t>(w.size());
    const double* v = u.values().data();

    if (lines == 1) {
        const std::int64_t nb = (M + kShiftBlock - 1) / kShiftBlock;
        std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
        parallel_blocks(nb, [&](std::int64_t b) {
            const std::int64_t m0 = 1 + b * kShiftBlock;
            const std::int64_t m1 = std::min<std::int64_t>(M, m0 + kShiftBlock - 1);
            double acc = 0.0;
            for (std::int64_t m = m0; m <= m1; ++m)
                acc += w[static_cast<std::size_t>(m - 1)] * kernels::diff_pair_energy(v, n, m, p);
            partial[static_cast<std::size_t>(b)] = acc;
        });
        return pairwise_sum(partial);
    }

    std::vector<double> partial(lines, 0.0);
    parallel_blocks(static_cast<std::int64_t>(lines), [&](std::int64_t l) {
        std::vector<double> buf;
        const double* line = v + g.line_base(axis, static_cast<std::size_t>(l));
        if (st != 1) {
            buf.resize(n);
            gather(v, g.line_base(axis, static_cast<std::size_t>(l)), st, n, buf.data());
            line = buf.data();
        }
        double acc = 0.0;
        for (std::int64_t m = 1; m <= M; ++m)
            acc += w[static_cast<std::size_t>(m - 1)] * kernels::diff_pair_energy(line, n, m, p);
        partial[static_cast<std::size_t>(l)] = acc;
    });
    return pairwise_sum(partial);
}

// bilinear analogue with phi(t) = sign(t)|t|^q applied to the u-differences
inline double frac_form(const GridFunction& u, const GridFunction& v, std::size_t axis,
                        std::span<const double> w, double q) {
    const TensorGrid& g = u.grid();
    const std::size_t n = static_cast<std::size_t>(g.count(axis));
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const std::int64_t M = static_cast<std::int64_t>(w.size());
    const double* uv = u.values().data();
    const double* vv = v.values().data();

    if (lines == 1) {
        const std::int64_t nb = (M + kShiftBlock - 1) / kShiftBlock;
        std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
        parallel_blocks(nb, [&](std::int64_t b) {
            const std::int64_t m0 = 1 + b * kShiftBlock;
            const std::int64_t m1 = std::min<std::int64_t>(M, m0 + kShiftBlock - 1);
            double acc = 0.0;
            for (std::int64_t m = m0; m <= m1; ++m)
                acc +=
                    w[static_cast<std::size_t>(m - 1)] * kernels::diff_pair_form(uv, vv, n, m, q);
            partial[static_cast<std::size_t>(b)] = acc;
        });
        return pairwise_sum(partial);
    }

    std::vector<double> partial(lines, 0.0);
    parallel_blocks(static_cast<std::int64_t>(lines), [&](std::int64_t l) {
        const std::size_t base = g.line_base(axis, static_cast<std::size_t>(l));
        std::vector<double> bu, bv;
        const double* lu = uv + base;
        const double* lv = vv + base;
        if (st != 1) {
            bu.resize(n);
            bv.resize(n);
            gather(uv, base, st, n, bu.data());
            gather(vv, base, st, n, bv.data());
            lu = bu.data();
            lv = bv.data();
        }
        double acc = 0.0;
        for (std::int64_t m = 1; m <= M; ++m)
            acc += w[static_cast<std::size_t>(m - 1)] * kernels::diff_pair_form(lu, lv, n, m, q);
        partial[static_cast<std::size_t>(l)] = acc;
    });
    return pairwise_sum(partial);
}

// r += scale * (shift-sum flux); r has the layout of u
inline void frac_flux(const GridFunction& u, std::size_t axis, std::span<const double> w,
                      double q, double scale, std::vector<double>& r) {
    const TensorGrid& g = u.grid();
    const std::size_t n = static_cast<std::size_t>(g.count(axis));
    const std::size_t st = g.stride(axis);
    const std::size_t lines = g.line_count(axis);
    const std::int64_t M = static_cast<std::int64_t>(w.size());
    const double* v = u.values().data();

    if (lines == 1) {
        const std::int64_t nb = (M + kShiftBlock - 1) / kShiftBlock;
        std::vector<std::vector<double>> bufs(static_cast<std::size_t>(nb));
        parallel_blocks(nb, [&](std::int64_t b) {
            auto& rb = bufs[static_cast<std::size_t>(b)];
            rb.assign(n, 0.0);
            const std::int64_t m0 = 1 + b * kShiftBlock;
            const std::int64_t m1 = std::min<std::int64_t>(M, m0 + kShiftBlock - 1);
            for (std::int64_t m = m0; m <= m1; ++m)
                kernels::diff_pair_flux(v, n, m, q, w[static_cast<std::size_t>(m - 1)],
                                        rb.data());
        });
        for (const auto& rb : bufs)
            for (std::size_t k = 0; k < n; ++k) r[k] += scale * rb[k];
        return;
    }

    parallel_blocks(static_cast<std::int64_t>(lines), [&](std::int64_t l) {
        const std::size_t base = g.line_base(axis, static_cast<std::size_t>(l));
        std::vector<double> bu(n), rb(n, 0.0);
        const double* line = v + base;
        if (st != 1) {
            gather(v, base, st, n, bu.data());
            line = bu.data();
        }
        for (std::int64_t m = 1; m <= M; ++m)
            kernels::diff_pair_flux(line, n, m, q, w[static_cast<std::size_t>(m - 1)], rb.data());
        for (std::size_t k = 0; k < n; ++k) r[base + k * st] += scale * rb[k];
    });
}

}  // namespace aniso::detail
