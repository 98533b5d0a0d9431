#include "multiroot.hpp"

#include <cmath>

namespace sgrf {

std::vector<RootRecord> find_all(const ScalarField& field, const Domain& domain,
                                 const SolverConfig& solver_cfg, const MultirootConfig& cfg) {
    if (cfg.max_roots < 1) throw InvalidArgument("max_roots must be >= 1");
    if (!(cfg.residual_accept > 0.0)) throw InvalidArgument("residual_accept must be positive");
    const double radius =
        cfg.exclusion_radius > 0.0 ? cfg.exclusion_radius : 0.05 * domain.diagonal();
    if (!(radius > 0.0)) throw InvalidArgument("exclusion radius must be positive");

    Domain carved = domain;
    std::vector<RootRecord> records;
    for (int round = 0; round < cfg.max_roots; ++round) {
        SolverConfig round_cfg = solver_cfg;
        round_cfg.adaptive = true; // uniform sampling cannot pick a basin
        round_cfg.seed = derive_seed(solver_cfg.seed, static_cast<std::uint64_t>(round));
        const SolveResult sol = adaptive_run(field, carved, round_cfg);

        bool in_existing = false;
        for (const auto& ball : carved.exclusions()) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < sol.estimate.size(); ++j) {
                const double d = sol.estimate[j] - ball.center[j];
                d2 += d * d;
            }
            if (d2 < ball.radius * ball.radius) {
                in_existing = true;
                break;
            }
        }
        if (in_existing) break; // converged into an already-carved basin

        if (sol.residual > cfg.residual_accept) break; // no further root found

        records.push_back(RootRecord{sol.estimate, sol.residual, sol.samples, sol.sigma});
        carved.add_exclusion(ExclusionBall{sol.estimate, radius});
    }
    return records;
}

} // namespace sgrf
