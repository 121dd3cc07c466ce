#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace aniso {

// Worker count used by parallel_blocks. Defaults to the hardware concurrency.
int num_threads();
void set_num_threads(int n);

// Runs fn(b) for every b in [0, nblocks). Blocks are claimed dynamically but
// each writes only to data indexed by its own block id, so results never
// depend on the thread count or on scheduling order.
void parallel_blocks(std::int64_t nblocks, const std::function<void(std::int64_t)>& fn);

// Fixed-order pairwise reduction; used as the final combine after
// parallel_blocks so sums are bit-stable across thread counts.
double pairwise_sum(std::span<const double> xs);

}  // namespace aniso
