#pragma once

#include <functional>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/norms.hpp"

namespace aniso {

// Duality map of the mixed norm: the first variation of u -> mixed_norm(u,p),
//   prod_i I_i(u)^{p_{i+1} - p_i} * |u|^{p_1 - 2} u   with p_{n+1} = 1,
// each partial norm broadcast over the axes it no longer depends on. Its
// mixed norm in the conjugate exponents equals mixed_norm(u, p) identically
// at the discrete level. Throws std::domain_error for u == 0.
GridFunction duality_map(const GridFunction& u, const ExponentVector& p);

// sum of f*v*cell_volume over the interior nodes; grids must match.
double pairing(const GridFunction& f, const GridFunction& v);

// First variation of the (optionally weighted) anisotropic gradient norm
// H(u) = sum_i w_i ||forward_diff(u,i)||_{p_i}, applied to a direction v:
//   sum_i w_i N_i^{1-p_i} sum_staggered |g_i|^{p_i-2} g_i h_i * cell_volume
// with g_i, h_i the staggered differences of u and v and N_i the directional
// norm of g_i. Throws std::domain_error for u == 0.
double local_variation_apply(const GridFunction& u, const GridFunction& v,
                             const ExponentVector& p, std::span<const double> weights = {});

// Grid function r with pairing(r, v) = local_variation_apply(u, v) for all v;
// assembled as the negative discrete divergence (the exact adjoint of
// forward_diff) of the normalized flux.
GridFunction local_variation_residual(const GridFunction& u, const ExponentVector& p,
                                      std::span<const double> weights = {});

// First variation of the fractional seminorm sum_i [u]_i with the same shift
// set, band and tail conventions as fractional_directional. Satisfies the
// Euler identity fractional_variation_apply(u,u) = fractional_seminorm(u).
double fractional_variation_apply(const GridFunction& u, const GridFunction& v,
                                  const FractionalVector& s, const ExponentVector& p,
                                  std::int64_t window, bool normalized);

GridFunction fractional_variation_residual(const GridFunction& u, const FractionalVector& s,
                                           const ExponentVector& p, std::int64_t window,
                                           bool normalized);

// Central-difference check of a first variation: compares
// (J(u + t v) - J(u - t v)) / (2 t) against `derivative(u, v)` over a step
// sweep and reports the best agreement.
struct GateauxReport {
    double best_rel_error = 0.0;
    double best_step = 0.0;
    std::vector<std::pair<double, double>> sweep;  // (step, rel error)
};

GateauxReport gateaux_check(const std::function<double(const GridFunction&)>& J,
                            const std::function<double(const GridFunction&, const GridFunction&)>&
                                derivative,
                            const GridFunction& u, const GridFunction& v,
                            std::span<const double> steps = {});

}  // namespace aniso
