#pragma once

#include "samplers.hpp"

namespace sgrf {

struct RootRecord {
    Vec location;
    double residual = 0.0; // |f| at location
    std::int64_t samples_used = 0;
    Vec final_sigma;
};

struct MultirootConfig {
    int max_roots = 8;
    double exclusion_radius = 0.0;  // <= 0 -> 0.05 * box diagonal
    double residual_accept = 1e-6;
};

// Sequential discovery: solve, carve an exclusion ball around the accepted
// root, repeat. Stops when the estimate falls in an existing ball (no new
// basin), when the residual check rejects it, or at max_roots.
std::vector<RootRecord> find_all(const ScalarField& field, const Domain& domain,
                                 const SolverConfig& solver_cfg, const MultirootConfig& cfg);

} // namespace sgrf
