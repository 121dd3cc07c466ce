#pragma once

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"

namespace aniso {

// Stack of the partial mixed norms. levels[j] (j = 0..n-1) holds the values
// of the (j+1)-th level of the recursion as an array over the remaining axes
// j+1..n-1; the last level is a single scalar, the mixed norm itself.
struct PartialNormStack {
    std::vector<std::vector<double>> levels;
    double value() const { return levels.back().front(); }
};

// Iterated rectangle-rule norm: level 1 integrates |u|^{p_1} along axis 1,
// each further level raises the previous one to the next exponent and
// integrates along the next axis. The overload on a raw exponent span accepts
// any order and is used for dual norms (conjugate exponents are
// non-increasing).
double mixed_norm(const GridFunction& u, std::span<const double> p);
double mixed_norm(const GridFunction& u, const ExponentVector& p);
PartialNormStack mixed_norm_partials(const GridFunction& u, std::span<const double> p);
PartialNormStack mixed_norm_partials(const GridFunction& u, const ExponentVector& p);

// (sum |g|^p * cell volume)^{1/p} over a staggered difference array.
double directional_norm(std::span<const double> g, double p, const TensorGrid& grid);

// sum over axes of w_i * directional_norm(forward_diff(u, i), p_i). The
// weighted overload backs the local limit functional used by the s-sweep;
// weights must be positive.
double gradient_norm(const GridFunction& u, const ExponentVector& p);
double gradient_norm(const GridFunction& u, const ExponentVector& p,
                     std::span<const double> weights);

// One directional fractional energy, split into its three parts:
//   inner_sum  rectangle sum over shifts 0 < |m| <= M of
//              |u(x+m*d*e_i) - u(x)|^p / |m*d|^{1+s*p} * d * cell_volume
//   inner_band the |h| < d contribution, integrated analytically with the
//              staggered slope g:  sum |g|^p * 2 d^{p(1-s)} / (p(1-s)) * vol
//   tail       the |h| > M*d remainder, exact for the zero-extended u:
//              sum |u|^p * 2 (M*d)^{-s*p} / (s*p) * vol
// With `normalized` each part carries the additional factor (1-s). raw_power
// is their sum and seminorm = raw_power^{1/p}.
struct FractionalTerms {
    double inner_sum = 0.0;
    double inner_band = 0.0;
    double tail = 0.0;
    double raw_power = 0.0;
    double seminorm = 0.0;
    bool normalized = false;
};

// Smallest window with an exact tail formula: M * spacing >= 2 * extent,
// i.e. M = 2 * (counts + 1).
std::int64_t exact_tail_window(const TensorGrid& grid, std::size_t axis);

FractionalTerms fractional_directional(const GridFunction& u, double s, double p,
                                       std::size_t axis, std::int64_t window, bool normalized);

// Sum over axes of the directional seminorms. window = 0 picks the exact-tail
// minimum per axis; window > 0 is used for every axis and validated per axis.
double fractional_seminorm(const GridFunction& u, const FractionalVector& s,
                           const ExponentVector& p, std::int64_t window, bool normalized);

}  // namespace aniso
