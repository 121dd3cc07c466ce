#include "aniso/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace aniso::kernels {

namespace scalar {
double sum_abs_pow(const double*, std::size_t, double);
void accum_abs_pow(const double*, std::size_t, double, double*);
void signed_pow(const double*, std::size_t, double, double*);
double dot(const double*, const double*, std::size_t);
double diff_pair_energy(const double*, std::size_t, std::int64_t, double);
double diff_pair_form(const double*, const double*, std::size_t, std::int64_t, double);
void diff_pair_flux(const double*, std::size_t, std::int64_t, double, double, double*);
}  // namespace scalar

#ifdef ANISO_HAVE_AVX2
namespace avx2 {
const Table& get_table();
}
#endif

namespace {

const Table& scalar_table() {
    static const Table t{"scalar",
                         &scalar::sum_abs_pow,
                         &scalar::accum_abs_pow,
                         &scalar::signed_pow,
                         &scalar::dot,
                         &scalar::diff_pair_energy,
                         &scalar::diff_pair_form,
                         &scalar::diff_pair_flux};
    return t;
}

bool cpu_has_avx2() {
#ifdef ANISO_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_default() { return cpu_has_avx2() ? Backend::avx2 : Backend::scalar; }

std::atomic<const Table*>& current() {
    static std::atomic<const Table*> tab{&table(detect_default())};
    return tab;
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

const Table& table(Backend b) {
    if (b == Backend::scalar) return scalar_table();
#ifdef ANISO_HAVE_AVX2
    if (cpu_has_avx2()) return avx2::get_table();
#endif
    throw std::invalid_argument("kernel backend not supported on this machine");
}

Backend active_backend() {
    return current().load(std::memory_order_relaxed) == &scalar_table() ? Backend::scalar
                                                                        : Backend::avx2;
}

void set_backend(Backend b) { current().store(&table(b), std::memory_order_relaxed); }

double sum_abs_pow(const double* x, std::size_t n, double p) {
    return current().load(std::memory_order_relaxed)->sum_abs_pow(x, n, p);
}

void accum_abs_pow(const double* x, std::size_t n, double p, double* acc) {
    current().load(std::memory_order_relaxed)->accum_abs_pow(x, n, p, acc);
}

void signed_pow(const double* x, std::size_t n, double q, double* out) {
    current().load(std::memory_order_relaxed)->signed_pow(x, n, q, out);
}

double dot(const double* a, const double* b, std::size_t n) {
    return current().load(std::memory_order_relaxed)->dot(a, b, n);
}

double diff_pair_energy(const double* u, std::size_t n, std::int64_t m, double p) {
    return current().load(std::memory_order_relaxed)->diff_pair_energy(u, n, m, p);
}

double diff_pair_form(const double* u, const double* v, std::size_t n, std::int64_t m, double q) {
    return current().load(std::memory_order_relaxed)->diff_pair_form(u, v, n, m, q);
}

void diff_pair_flux(const double* u, std::size_t n, std::int64_t m, double q, double w,
                    double* r) {
    current().load(std::memory_order_relaxed)->diff_pair_flux(u, n, m, q, w, r);
}

}  // namespace aniso::kernels
