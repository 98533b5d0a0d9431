#pragma once

#include <cstdint>
#include <deque>

#include "density.hpp"
#include "estimator.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace sgrf {

struct TraceRow {
    std::int64_t samples = 0;
    Vec estimate;
    Vec sigma;
};
using Trace = std::vector<TraceRow>;

struct AdaptiveConfig {
    int update_every = 5;        // samples between proposal updates
    int window = 0;              // sigma averaging window; 0 -> 10*n
    double tol = 1e-9;           // stop when ||sigma||_inf < tol
    double sigma0_factor = 10.0; // initial sigma = factor * (upper - lower)
    double sigma_floor = 0.0;    // absolute floor; <= 0 -> 1e-12 * range per dim
};

// Proposal state for the adaptive Gaussian sampler: per-dimension mean and
// width, plus a ring buffer of recent estimates driving the width update.
struct AdaptiveState {
    Vec mean;
    Vec sigma;
    std::deque<Vec> history; // most recent window+1 estimates
    int window = 0;
    int update_every = 5;
    Vec sigma_floor;
};

AdaptiveState initial_state(const Domain& domain, const AdaptiveConfig& cfg);

// Uniform draw over box minus exclusions (rejection). The matching proposal
// log-density is 0: the constant cancels in the ratio estimator.
Vec uniform_next(const Domain& domain, Rng& rng);

// Draw from the product density prop. to exp(-sum_j (x_j-mean_j)^2/sigma_j^2)
// (i.e. Gaussian with standard deviation sigma_j/sqrt(2)), truncated to the
// box per coordinate, then rejected against exclusion balls. Returns the
// point and the normalized untruncated log-density at it.
struct GaussianDraw {
    Vec point;
    double log_density = 0.0;
};
GaussianDraw gaussian_next(const AdaptiveState& st, const Domain& domain, Rng& rng);

// Normalized log-density of the current proposal at x.
double gaussian_log_density(const AdaptiveState& st, const Vec& x);

// Sigma update: mean absolute successive difference over the most recent
// min(window, available) estimate pairs, clamped at the floor; the proposal
// mean moves to the latest solution estimate. Requires >= 2 history entries.
void update_sigma(AdaptiveState& st, const Vec& latest_estimate, const Domain& domain);

struct SolveResult {
    Vec estimate;
    Vec sigma; // zeros for the uniform strategy
    std::int64_t samples = 0;
    bool converged = false;
    double residual = 0.0; // |f| at the estimate
    Trace trace;
};

struct SolverConfig {
    DensityParams density; // density.k <= 0 requests default_k(n, 1)
    bool adaptive = true;
    std::int64_t budget = 10000;
    std::uint64_t seed = 0;
    int workers = 1;
    AdaptiveConfig ad;
    int uniform_stride = 0; // checkpoint cadence; 0 -> ceil(budget/200)
};

SolveResult uniform_run(const ScalarField& field, const Domain& domain, const SolverConfig& cfg);
SolveResult adaptive_run(const ScalarField& field, const Domain& domain, const SolverConfig& cfg);

// Dispatch on cfg.adaptive; resolves defaulted parameters.
SolveResult solve(const ScalarField& field, const Domain& domain, const SolverConfig& cfg);

// Resolved density exponent for this run (cfg value or default_k).
int effective_k(const SolverConfig& cfg, std::size_t n);

} // namespace sgrf
