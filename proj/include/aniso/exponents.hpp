#pragma once

#include <optional>
#include <span>
#include <vector>

namespace aniso {

// Integrability parameters p = (p_1,...,p_n). Construction enforces
// 1 < p_i < inf and the non-decreasing order the rest of the library assumes.
// Unsorted input is rejected rather than sorted: the mixed-norm recursion is
// tied to the axis order, so reordering silently would change semantics.
class ExponentVector {
  public:
    explicit ExponentVector(std::vector<double> p);

    std::size_t dim() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& values() const { return p_; }
    std::span<const double> span() const { return p_; }

    // p_i / (p_i - 1); note the result is non-increasing, so it is returned
    // as a raw vector, not an ExponentVector.
    std::vector<double> conjugate() const;

  private:
    std::vector<double> p_;
};

// Fractional orders s = (s_1,...,s_n), each strictly inside (0,1).
class FractionalVector {
  public:
    explicit FractionalVector(std::vector<double> s);

    std::size_t dim() const { return s_.size(); }
    double operator[](std::size_t i) const { return s_[i]; }
    const std::vector<double>& values() const { return s_; }
    std::span<const double> span() const { return s_; }

  private:
    std::vector<double> s_;
};

// (n^{-1} sum 1/q_i)^{-1}; throws std::domain_error unless all q_i > 0.
double harmonic_mean(std::span<const double> q);

// coordinatewise product (q_1 r_1, ..., q_n r_n)
std::vector<double> coordinate_product(std::span<const double> q, std::span<const double> r);

// n * hm(p) / (n - hm(p)); requires hm(p) < n (throws std::domain_error) and
// n == p.dim() (throws std::invalid_argument).
double critical_exponent(const ExponentVector& p, int n);

// n * (hm(sp)/hm(s)) / (n - hm(sp)); requires hm(sp) < n.
double fractional_critical_exponent(const FractionalVector& s, const ExponentVector& p, int n);

// Outcome of checking the standing assumptions on (p, s, n). Never throws:
// failures are reported, and the critical exponents are present only when
// their defining condition holds. The fractional entries are evaluated only
// when s is supplied.
struct ValidityReport {
    bool sorted_ok = false;                  // 1 < p_1 <= ... <= p_n
    bool local_subcritical_ok = false;       // hm(p) < n
    bool fractional_evaluated = false;
    bool fractional_subcritical_ok = false;  // hm(sp) < n
    bool fractional_embedding_ok = false;    // p_n < fractional critical exponent
    std::optional<double> pstar;
    std::optional<double> pstar_s;

    bool local_ok() const { return sorted_ok && local_subcritical_ok; }
    bool fractional_ok() const {
        return sorted_ok && fractional_subcritical_ok && fractional_embedding_ok;
    }
};

ValidityReport validate(std::span<const double> p,
                        std::optional<std::span<const double>> s, int n);

}  // namespace aniso
