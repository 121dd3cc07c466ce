#include "aniso/kernels.hpp"

#include <algorithm>
#include <cmath>

// Reference kernels. Plain loops over std::pow, with a fast path for p == 2
// (the single most common exponent). The AVX2 variants are validated against
// these, so keep them simple.
namespace aniso::kernels::scalar {

namespace {

inline double abs_pow(double x, double p) { return std::pow(std::fabs(x), p); }

// sign(x) * |x|^q, with phi(0) = 0. q > 0 in every caller, so std::pow(0, q)
// already returns 0 and no special case is needed.
inline double phi(double x, double q) {
    const double a = std::pow(std::fabs(x), q);
    return x < 0.0 ? -a : a;
}

}  // namespace

double sum_abs_pow(const double* x, std::size_t n, double p) {
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) acc += abs_pow(x[i], p);
    }
    return acc;
}

void accum_abs_pow(const double* x, std::size_t n, double p, double* acc) {
    if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * x[i];
    } else {
        for (std::size_t i = 0; i < n; ++i) acc[i] += abs_pow(x[i], p);
    }
}

void signed_pow(const double* x, std::size_t n, double q, double* out) {
    if (q == 1.0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
        return;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = phi(x[i], q);
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double diff_pair_energy(const double* u, std::size_t n, std::int64_t m, double p) {
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t overlap = mm < n ? n - mm : 0;
    const std::size_t edge = std::min(mm, n);
    double acc = 0.0;
    if (p == 2.0) {
        for (std::size_t a = 0; a < overlap; ++a) {
            const double d = u[a + mm] - u[a];
            acc += d * d;
        }
        acc *= 2.0;
        for (std::size_t x = 0; x < edge; ++x) acc += u[x] * u[x];
        for (std::size_t x = n - edge; x < n; ++x) acc += u[x] * u[x];
    } else {
        for (std::size_t a = 0; a < overlap; ++a) acc += abs_pow(u[a + mm] - u[a], p);
        acc *= 2.0;
        for (std::size_t x = 0; x < edge; ++x) acc += abs_pow(u[x], p);
        for (std::size_t x = n - edge; x < n; ++x) acc += abs_pow(u[x], p);
    }
    return acc;
}

double diff_pair_form(const double* u, const double* v, std::size_t n, std::int64_t m, double q) {
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t overlap = mm < n ? n - mm : 0;
    const std::size_t edge = std::min(mm, n);
    double acc = 0.0;
    if (q == 1.0) {
        for (std::size_t a = 0; a < overlap; ++a)
            acc += (u[a + mm] - u[a]) * (v[a + mm] - v[a]);
        acc *= 2.0;
        for (std::size_t x = 0; x < edge; ++x) acc += u[x] * v[x];
        for (std::size_t x = n - edge; x < n; ++x) acc += u[x] * v[x];
        return acc;
    }
    for (std::size_t a = 0; a < overlap; ++a)
        acc += phi(u[a + mm] - u[a], q) * (v[a + mm] - v[a]);
    acc *= 2.0;
    for (std::size_t x = 0; x < edge; ++x) acc += phi(u[x], q) * v[x];
    for (std::size_t x = n - edge; x < n; ++x) acc += phi(u[x], q) * v[x];
    return acc;
}

void diff_pair_flux(const double* u, std::size_t n, std::int64_t m, double q, double w,
                    double* r) {
    const std::size_t mm = static_cast<std::size_t>(m);
    const std::size_t overlap = mm < n ? n - mm : 0;
    const std::size_t edge = std::min(mm, n);
    if (q == 1.0) {
        for (std::size_t a = 0; a < overlap; ++a) {
            const double t = 2.0 * w * (u[a + mm] - u[a]);
            r[a] -= t;
            r[a + mm] += t;
        }
        for (std::size_t x = 0; x < edge; ++x) r[x] += w * u[x];
        for (std::size_t x = n - edge; x < n; ++x) r[x] += w * u[x];
        return;
    }
    for (std::size_t a = 0; a < overlap; ++a) {
        const double t = 2.0 * w * phi(u[a + mm] - u[a], q);
        r[a] -= t;
        r[a + mm] += t;
    }
    for (std::size_t x = 0; x < edge; ++x) r[x] += w * phi(u[x], q);
    for (std::size_t x = n - edge; x < n; ++x) r[x] += w * phi(u[x], q);
}

}  // namespace aniso::kernels::scalar
