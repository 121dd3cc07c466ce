#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops shared by the norm and variation code. Every
// routine exists as a scalar reference implementation and, on x86-64, as an
// AVX2 variant selected at runtime. The two are equivalence-tested against
// each other; callers never depend on which one runs beyond floating-point
// round-off.
namespace aniso::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Backend used by the free functions below. Defaults to the widest supported
// instruction set; can be pinned (e.g. by the CLI's --kernel flag or by the
// equivalence tests). Throws std::invalid_argument for unsupported backends.
Backend active_backend();
void set_backend(Backend b);

struct Table {
    const char* name;
    double (*sum_abs_pow)(const double* x, std::size_t n, double p);
    void (*accum_abs_pow)(const double* x, std::size_t n, double p, double* acc);
    void (*signed_pow)(const double* x, std::size_t n, double q, double* out);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*diff_pair_energy)(const double* u, std::size_t n, std::int64_t m, double p);
    double (*diff_pair_form)(const double* u, const double* v, std::size_t n, std::int64_t m,
                             double q);
    void (*diff_pair_flux)(const double* u, std::size_t n, std::int64_t m, double q, double w,
                           double* r);
};

// Direct access to a specific backend (used by the equivalence tests).
const Table& table(Backend b);

// sum over i of |x_i|^p
double sum_abs_pow(const double* x, std::size_t n, double p);

// acc_i += |x_i|^p
void accum_abs_pow(const double* x, std::size_t n, double p, double* acc);

// out_i = sign(x_i) * |x_i|^q with the convention 0^q = 0 (q > 0)
void signed_pow(const double* x, std::size_t n, double q, double* out);

double dot(const double* a, const double* b, std::size_t n);

// The next three walk one grid line of n interior values with zero extension
// outside [0, n) and combine the shifts +m and -m (m >= 1):
//
//   diff_pair_energy = 2 * sum_{a} |u[a+m] - u[a]|^p   (pairs fully inside)
//                    +     sum over the min(m,n) head and tail entries of |u|^p
//
// which equals sum over both signed shifts of sum_x |u(x+shift) - u(x)|^p.
double diff_pair_energy(const double* u, std::size_t n, std::int64_t m, double p);

// Same combined shift sum for the bilinear form, with phi(t) = sign(t)|t|^q:
//   2 * sum_a phi(u[a+m]-u[a]) * (v[a+m]-v[a]) + sum_{head,tail} phi(u) * v
double diff_pair_form(const double* u, const double* v, std::size_t n, std::int64_t m, double q);

// Scatter of the same form into a residual line r (adjoint in v):
//   pairs: t = 2*w*phi(u[a+m]-u[a]);  r[a] -= t;  r[a+m] += t
//   head/tail x:                      r[x] += w*phi(u[x])
void diff_pair_flux(const double* u, std::size_t n, std::int64_t m, double q, double w, double* r);

}  // namespace aniso::kernels
