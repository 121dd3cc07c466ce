#pragma once

#include <cstdint>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"

namespace aniso {

struct SolveConfig {
    double tol_residual = 1e-7;   // dual mixed-norm of the Euler-Lagrange residual
    int max_iter = 20000;
    double initial_step = 1.0;    // first trial step, also the warm-start cap
    double backtrack_factor = 0.5;
    int restarts = 3;
    std::uint64_t rng_seed = 42;

    void validate() const;
};

struct IterationRecord {
    int iteration;
    double q;
    double residual;
};

// Result of one Rayleigh-quotient minimization. The eigenfunction is
// normalized to mixed_norm(u, p) = 1 and lambda equals the quotient at u, so
// the eigen-identity energy = lambda * mixed_norm holds by construction;
// `residual` is the dual mixed norm of (variation residual - lambda *
// duality_map) at u.
struct SolveReport {
    double lambda = 0.0;
    GridFunction u;
    double residual = 0.0;
    int iterations = 0;
    std::vector<IterationRecord> history;
    bool converged = false;
    int restart_index = 0;
};

// gradient_norm / mixed_norm; throws std::domain_error for u == 0.
double rayleigh_local(const GridFunction& u, const ExponentVector& p);

// fractional_seminorm / mixed_norm.
double rayleigh_fractional(const GridFunction& u, const FractionalVector& s,
                           const ExponentVector& p, std::int64_t window, bool normalized);

// Projected gradient descent on {mixed_norm(u) = 1}: the descent direction is
// the negative Euler-Lagrange residual, the step is backtracked until the
// quotient decreases, and the iterate is renormalized after every step. Over
// `restarts` random nonnegative starts, returns the lowest-quotient converged
// report (or the lowest-quotient report with converged = false when no
// restart reaches the residual tolerance). The optional positive `weights`
// scale the directional norms of the energy.
SolveReport minimize_local(const ExponentVector& p, const TensorGrid& grid,
                           const SolveConfig& config, std::span<const double> weights = {});

SolveReport minimize_fractional(const FractionalVector& s, const ExponentVector& p,
                                const TensorGrid& grid, const SolveConfig& config,
                                std::int64_t window, bool normalized);

struct SweepRow {
    std::vector<double> s;
    double lambda_s = 0.0;
    double lambda_local = 0.0;
    double lambda_local_limit = 0.0;
    double ratio = 0.0;  // lambda_s / lambda_local_limit
    double residual = 0.0;
    bool converged = false;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    bool local_converged = false;
    bool limit_converged = false;
    bool all_converged() const;
};

// For each s computes the first eigenvalue of the normalized fractional
// quotient, next to the plain local eigenvalue and the local limit
// min of sum_i (2/p_i)^{1/p_i} ||u_xi||_{p_i} / ||u||_p that the normalized
// quotients approach as s -> 1.
SweepTable s_sweep(const ExponentVector& p, const TensorGrid& grid,
                   const std::vector<FractionalVector>& s_list, const SolveConfig& config,
                   std::int64_t window = 0);

}  // namespace aniso
