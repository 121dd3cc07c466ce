#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aniso {

// One row of the invariant suite: `statistic` is the worst case observed
// (max error for identities, min slack for inequalities) and `threshold` the
// bound it was checked against.
struct InvariantResult {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Runs every module's invariant checks on seeded random instances.
std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed);

}  // namespace aniso
