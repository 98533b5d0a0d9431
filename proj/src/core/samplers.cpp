#include "samplers.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace sgrf {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr long kMaxRejections = 1000000;

double clampd(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

bool inside_any_exclusion(const Domain& domain, const Vec& x) {
    for (const auto& ball : domain.exclusions()) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - ball.center[j];
            d2 += d * d;
        }
        if (d2 < ball.radius * ball.radius) return true;
    }
    return false;
}

} // namespace

int effective_k(const SolverConfig& cfg, std::size_t n) {
    if (cfg.density.k > 0) return cfg.density.k;
    return default_k(static_cast<int>(n), 1);
}

AdaptiveState initial_state(const Domain& domain, const AdaptiveConfig& cfg) {
    const std::size_t n = domain.dim();
    if (cfg.update_every < 1) throw InvalidArgument("update_every must be >= 1");
    if (cfg.window < 0) throw InvalidArgument("window must be >= 1");
    if (!(cfg.tol >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
    AdaptiveState st;
    st.window = cfg.window > 0 ? cfg.window : static_cast<int>(10 * n);
    st.update_every = cfg.update_every;
    st.mean.resize(n);
    st.sigma.resize(n);
    st.sigma_floor.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double range = domain.upper()[j] - domain.lower()[j];
        if (!(range > 0.0))
            throw InvalidArgument("adaptive sampling requires a non-degenerate box");
        st.mean[j] = 0.5 * (domain.lower()[j] + domain.upper()[j]);
        st.sigma[j] = cfg.sigma0_factor * range;
        st.sigma_floor[j] = cfg.sigma_floor > 0.0 ? cfg.sigma_floor : 1e-12 * range;
    }
    st.history.clear();
    st.history.push_back(st.mean); // x~^0: the initial estimate
    return st;
}

Vec uniform_next(const Domain& domain, Rng& rng) {
    const std::size_t n = domain.dim();
    Vec x(n);
    for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = domain.lower()[j];
            const double hi = domain.upper()[j];
            x[j] = lo + (hi - lo) * rng.uniform01();
        }
        if (!inside_any_exclusion(domain, x)) return x;
    }
    throw ExclusionSaturated("rejection sampling failed 10^6 consecutive times");
}

double gaussian_log_density(const AdaptiveState& st, const Vec& x) {
    double ld = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - st.mean[j];
        ld += -(d * d) / (st.sigma[j] * st.sigma[j]) - std::log(st.sigma[j] * kSqrtPi);
    }
    return ld;
}

GaussianDraw gaussianNextImpl(const AdaptiveState& st, const Domain& domain, Rng& rng) {
    const std::size_t n = domain.dim();
    Vec x(n);
    for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = domain.lower()[j];
            const double hi = domain.upper()[j];
            const double std_j = st.sigma[j] / std::sqrt(2.0);
            long tries = 0;
            for (;;) {
                const double v = st.mean[j] + std_j * rng.normal();
                if (v >= lo && v <= hi) {
                    x[j] = v;
                    break;
                }
                if (++tries >= kMaxRejections)
                    throw ExclusionSaturated("box truncation rejected 10^6 draws");
            }
        }
        if (!inside_any_exclusion(domain, x)) return {x, gaussian_log_density(st, x)};
    }
    throw ExclusionSaturated("rejection sampling failed 10^6 consecutive times");
}

GaussianDraw gaussian_next(const AdaptiveState& st, const Domain& domain, Rng& rng) {
    return gaussianNextImpl(st, domain, rng);
}

void update_sigma(AdaptiveState& st, const Vec& latest_estimate, const Domain& domain) {
    if (st.history.size() < 2) throw InvalidArgument("sigma update needs >= 2 estimates");
    const std::size_t n = st.mean.size();
    const std::size_t pairs =
        std::min<std::size_t>(static_cast<std::size_t>(st.window), st.history.size() - 1);
    const std::size_t first = st.history.size() - 1 - pairs;
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = first; i + 1 < st.history.size(); ++i)
            acc += std::fabs(st.history[i + 1][j] - st.history[i][j]);
        st.sigma[j] = std::max(acc / static_cast<double>(pairs), st.sigma_floor[j]);
    }
    for (std::size_t j = 0; j < n; ++j)
        st.mean[j] = clampd(latest_estimate[j], domain.lower()[j], domain.upper()[j]);
}

namespace {

// Consume samples [begin, end) into per-worker accumulators and merge them in
// worker order. Draws come from per-sample substreams, so the result multiset
// is identical for every worker count; only summation order differs.
template <typename DrawFn>
void accumulate_range(RatioAccumulator& into, std::int64_t begin, std::int64_t end, int workers,
                      std::size_t n, const DrawFn& draw) {
    const std::int64_t total = end - begin;
    if (workers <= 1 || total < 2 * workers) {
        for (std::int64_t i = begin; i < end; ++i) draw(into, i);
        return;
    }
    std::vector<RatioAccumulator> parts;
    parts.reserve(workers);
    for (int w = 0; w < workers; ++w) parts.emplace_back(n);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> failures(workers);
    const std::int64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + w * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        threads.emplace_back([&, w, lo, hi] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) draw(parts[w], i);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
    for (auto& part : parts) into.merge(part);
}

} // namespace

SolveResult uniform_run(const ScalarField& field, const Domain& domain, const SolverConfig& cfg) {
    const std::size_t n = domain.dim();
    if (field.arity() != n) throw ArityMismatch("field arity does not match domain dimension");
    if (cfg.budget < 1) throw InvalidArgument("budget must be >= 1");
    DensityParams p = cfg.density;
    p.k = effective_k(cfg, n);
    p.validate();

    const std::int64_t stride =
        cfg.uniform_stride > 0 ? cfg.uniform_stride : (cfg.budget + 199) / 200;
    RatioAccumulator acc(n);
    SolveResult res;
    const auto draw = [&](RatioAccumulator& into, std::int64_t i) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
        const Vec x = uniform_next(domain, rng);
        into.consume(x, log_g(field.eval(x), p));
    };
    std::int64_t done = 0;
    while (done < cfg.budget) {
        const std::int64_t next = std::min<std::int64_t>(cfg.budget, done + stride);
        accumulate_range(acc, done, next, cfg.workers, n, draw);
        done = next;
        if (!acc.empty())
            res.trace.push_back(TraceRow{done, acc.estimate(), Vec(n, 0.0)});
    }
    res.estimate = acc.estimate();
    res.sigma = Vec(n, 0.0);
    res.samples = done;
    res.converged = true; // the uniform strategy has no tolerance criterion
    res.residual = std::fabs(field.eval(res.estimate));
    return res;
}

SolveResult adaptive_run(const ScalarField& field, const Domain& domain, const SolverConfig& cfg) {
    const std::size_t n = domain.dim();
    if (field.arity() != n) throw ArityMismatch("field arity does not match domain dimension");
    DensityParams p = cfg.density;
    p.k = effective_k(cfg, n);
    p.validate();
    if (p.eta == 0.0)
        throw InvalidArgument("eta = 0 is only supported with the uniform strategy");
    if (cfg.budget < cfg.ad.update_every)
        throw InvalidArgument("budget must be at least update_every");

    AdaptiveState st = initial_state(domain, cfg.ad);
    RatioAccumulator acc(n);
    SolveResult res;

    std::int64_t done = 0;
    while (done < cfg.budget) {
        const std::int64_t batch =
            std::min<std::int64_t>(st.update_every, cfg.budget - done);
        // Stage weights drop the per-stage normalization: within one proposal
        // the weighting is unchanged, and across stages narrow proposals are
        // not penalized by prod(sigma_j); see ledger on estimator freezing.
        double norm_const = 0.0;
        for (std::size_t j = 0; j < n; ++j) norm_const += std::log(st.sigma[j] * kSqrtPi);
        RatioAccumulator batch_acc(n);
        const auto draw = [&](RatioAccumulator& into, std::int64_t i) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(i));
            GaussianDraw d = gaussianNextImpl(st, domain, rng);
            const double lw = log_g(field.eval(d.point), p) - (d.log_density + norm_const);
            into.consume(d.point, lw);
        };
        if (cfg.workers <= 1) {
            for (std::int64_t i = done; i < done + batch; ++i) draw(batch_acc, i);
        } else {
            accumulate_range(batch_acc, done, done + batch, cfg.workers, n, draw);
        }
        acc.merge(batch_acc);
        done += batch;

        const Vec est = acc.estimate();
        st.history.push_back(batch_acc.empty() ? est : batch_acc.estimate());
        while (st.history.size() > static_cast<std::size_t>(st.window) + 1)
            st.history.pop_front();
        if (st.history.size() == static_cast<std::size_t>(st.window) + 1) {
            update_sigma(st, est, domain);
        } else {
            for (std::size_t j = 0; j < n; ++j)
                st.mean[j] = clampd(est[j], domain.lower()[j], domain.upper()[j]);
        }
        res.trace.push_back(TraceRow{done, est, st.sigma});

        double sig_max = 0.0;
        for (double s : st.sigma) sig_max = std::max(sig_max, s);
        if (sig_max < cfg.ad.tol || acc.saturated()) {
            res.converged = true;
            break;
        }
    }
    res.estimate = acc.estimate();
    res.sigma = st.sigma;
    res.samples = done;
    res.residual = std::fabs(field.eval(res.estimate));
    return res;
}

SolveResult solve(const ScalarField& field, const Domain& domain, const SolverConfig& cfg) {
    return cfg.adaptive ? adaptive_run(field, domain, cfg) : uniform_run(field, domain, cfg);
}

} // namespace sgrf
