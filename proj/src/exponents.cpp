#include "aniso/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aniso {

namespace {

bool in_open_range(double x, double lo, double hi) {
    return std::isfinite(x) && x > lo && x < hi;
}

bool exponents_admissible(std::span<const double> p) {
    if (p.empty()) return false;
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!in_open_range(p[i], 1.0, inf)) return false;
        if (i > 0 && p[i] < p[i - 1]) return false;
    }
    return true;
}

}  // namespace

ExponentVector::ExponentVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("exponent vector must be non-empty");
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (!in_open_range(p_[i], 1.0, std::numeric_limits<double>::infinity()))
            throw std::invalid_argument("exponents must satisfy 1 < p_i < inf");
        if (i > 0 && p_[i] < p_[i - 1])
            throw std::invalid_argument("exponents must be non-decreasing");
    }
}

std::vector<double> ExponentVector::conjugate() const {
    std::vector<double> c(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) c[i] = p_[i] / (p_[i] - 1.0);
    return c;
}

FractionalVector::FractionalVector(std::vector<double> s) : s_(std::move(s)) {
    if (s_.empty()) throw std::invalid_argument("fractional vector must be non-empty");
    for (double si : s_)
        if (!in_open_range(si, 0.0, 1.0))
            throw std::invalid_argument("fractional orders must satisfy 0 < s_i < 1");
}

double harmonic_mean(std::span<const double> q) {
    if (q.empty()) throw std::domain_error("harmonic mean of an empty vector");
    double inv = 0.0;
    for (double qi : q) {
        if (!(qi > 0.0)) throw std::domain_error("harmonic mean requires positive entries");
        inv += 1.0 / qi;
    }
    return static_cast<double>(q.size()) / inv;
}

std::vector<double> coordinate_product(std::span<const double> q, std::span<const double> r) {
    if (q.size() != r.size())
        throw std::invalid_argument("coordinate product requires equal lengths");
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = q[i] * r[i];
    return out;
}

double critical_exponent(const ExponentVector& p, int n) {
    if (n < 1 || static_cast<std::size_t>(n) != p.dim())
        throw std::invalid_argument("dimension must match the exponent vector");
    const double hm = harmonic_mean(p.span());
    if (!(hm < static_cast<double>(n)))
        throw std::domain_error("critical exponent undefined: harmonic mean >= n");
    return static_cast<double>(n) * hm / (static_cast<double>(n) - hm);
}

double fractional_critical_exponent(const FractionalVector& s, const ExponentVector& p, int n) {
    if (n < 1 || static_cast<std::size_t>(n) != p.dim() || s.dim() != p.dim())
        throw std::invalid_argument("dimension must match the exponent vectors");
    const double hm_sp = harmonic_mean(coordinate_product(s.span(), p.span()));
    if (!(hm_sp < static_cast<double>(n)))
        throw std::domain_error("fractional critical exponent undefined: harmonic mean of sp >= n");
    const double hm_s = harmonic_mean(s.span());
    return static_cast<double>(n) * (hm_sp / hm_s) / (static_cast<double>(n) - hm_sp);
}

ValidityReport validate(std::span<const double> p, std::optional<std::span<const double>> s,
                        int n) {
    ValidityReport rep;
    const bool dims_ok = n >= 1 && static_cast<std::size_t>(n) == p.size();
    rep.sorted_ok = dims_ok && exponents_admissible(p);

    if (rep.sorted_ok) {
        const double hm = harmonic_mean(p);
        rep.local_subcritical_ok = hm < static_cast<double>(n);
        if (rep.local_subcritical_ok)
            rep.pstar = static_cast<double>(n) * hm / (static_cast<double>(n) - hm);
    }

    if (s.has_value()) {
        rep.fractional_evaluated = true;
        bool s_ok = s->size() == p.size();
        for (double si : *s) s_ok = s_ok && in_open_range(si, 0.0, 1.0);
        if (rep.sorted_ok && s_ok) {
            const double hm_sp = harmonic_mean(coordinate_product(*s, p));
            rep.fractional_subcritical_ok = hm_sp < static_cast<double>(n);
            if (rep.fractional_subcritical_ok) {
                const double hm_s = harmonic_mean(*s);
                rep.pstar_s = static_cast<double>(n) * (hm_sp / hm_s) /
                              (static_cast<double>(n) - hm_sp);
                rep.fractional_embedding_ok = p.back() < *rep.pstar_s;
            }
        }
    }
    return rep;
}

}  // namespace aniso
