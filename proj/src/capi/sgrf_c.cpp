#include "sgrf/sgrf.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "../core/density.hpp"
#include "../core/expr.hpp"
#include "../core/field.hpp"
#include "../core/harness.hpp"
#include "../core/multiroot.hpp"
#include "../core/samplers.hpp"

using namespace sgrf;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

sgrf_status classify(const std::exception& e) {
    if (dynamic_cast<const ArityMismatch*>(&e)) return SGRF_ERR_ARITY_MISMATCH;
    if (dynamic_cast<const NonFiniteValue*>(&e)) return SGRF_ERR_NONFINITE_VALUE;
    if (dynamic_cast<const SyntaxError*>(&e)) return SGRF_ERR_SYNTAX;
    if (dynamic_cast<const UnknownIdentifier*>(&e)) return SGRF_ERR_UNKNOWN_IDENTIFIER;
    if (dynamic_cast<const ArityExceeded*>(&e)) return SGRF_ERR_ARITY_EXCEEDED;
    if (dynamic_cast<const EmptyEstimator*>(&e)) return SGRF_ERR_EMPTY_ESTIMATOR;
    if (dynamic_cast<const ExclusionSaturated*>(&e)) return SGRF_ERR_EXCLUSION_SATURATED;
    if (dynamic_cast<const InsufficientData*>(&e)) return SGRF_ERR_INSUFFICIENT_DATA;
    if (dynamic_cast<const UnknownBuiltin*>(&e)) return SGRF_ERR_UNKNOWN_BUILTIN;
    if (dynamic_cast<const InvalidArgument*>(&e)) return SGRF_ERR_INVALID_ARGUMENT;
    return SGRF_ERR_INTERNAL;
}

template <typename F>
sgrf_status guarded(F&& f) {
    try {
        f();
        return SGRF_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return classify(e);
    } catch (...) {
        set_error("unknown error");
        return SGRF_ERR_INTERNAL;
    }
}

template <typename T, typename F>
T* guarded_new(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    } catch (...) {
        set_error("unknown error");
        return nullptr;
    }
}

} // namespace

struct sgrf_field {
    ScalarField field;
    std::vector<Vec> known_roots; // ground truth for builtins, else empty
};

struct sgrf_domain {
    Domain domain;
};

struct sgrf_solver {
    SolverConfig cfg;
};

struct sgrf_result {
    SolveResult sol;
    ConvergenceTrace annotated;
    std::size_t n = 0;
};

struct sgrf_roots {
    std::vector<RootRecord> records;
    std::size_t n = 0;
};

struct sgrf_experiment {
    ExperimentResult result;
    std::size_t n = 0;
};

extern "C" {

const char* sgrf_last_error(void) { return g_last_error.c_str(); }

const char* sgrf_status_name(sgrf_status status) {
    switch (status) {
        case SGRF_OK: return "ok";
        case SGRF_ERR_ARITY_MISMATCH: return "arity mismatch";
        case SGRF_ERR_NONFINITE_VALUE: return "non-finite value";
        case SGRF_ERR_SYNTAX: return "syntax error";
        case SGRF_ERR_UNKNOWN_IDENTIFIER: return "unknown identifier";
        case SGRF_ERR_ARITY_EXCEEDED: return "arity exceeded";
        case SGRF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SGRF_ERR_EMPTY_ESTIMATOR: return "empty estimator";
        case SGRF_ERR_EXCLUSION_SATURATED: return "exclusion saturated";
        case SGRF_ERR_INSUFFICIENT_DATA: return "insufficient data";
        case SGRF_ERR_UNKNOWN_BUILTIN: return "unknown builtin";
        case SGRF_ERR_IO: return "i/o error";
        case SGRF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

sgrf_field* sgrf_field_builtin(const char* name) {
    return guarded_new<sgrf_field>([&]() -> sgrf_field* {
        if (!name) throw InvalidArgument("builtin name is NULL");
        const TestProblem& p = builtin_problem(name);
        return new sgrf_field{p.field, p.known_roots};
    });
}

sgrf_field* sgrf_field_expr(const char* text, int arity) {
    return guarded_new<sgrf_field>([&]() -> sgrf_field* {
        if (!text) throw InvalidArgument("expression text is NULL");
        if (arity < 1) throw InvalidArgument("arity must be >= 1");
        const Expression e = parse(text, static_cast<std::size_t>(arity));
        return new sgrf_field{to_field(e), {}};
    });
}

sgrf_status sgrf_expr_used(const char* text, int arity, int* out_used) {
    return guarded([&] {
        if (!text || !out_used) throw InvalidArgument("NULL argument");
        if (arity < 1) throw InvalidArgument("arity must be >= 1");
        const Expression e = parse(text, static_cast<std::size_t>(arity));
        for (int i = 0; i < arity; ++i) out_used[i] = e.used[static_cast<std::size_t>(i)] ? 1 : 0;
    });
}

sgrf_field* sgrf_field_custom(int arity, sgrf_eval_fn fn, void* user) {
    return guarded_new<sgrf_field>([&]() -> sgrf_field* {
        if (arity < 1) throw InvalidArgument("arity must be >= 1");
        if (!fn) throw InvalidArgument("callback is NULL");
        const int n = arity;
        auto wrapped = [fn, user, n](const Vec& x) { return fn(x.data(), n, user); };
        return new sgrf_field{ScalarField(static_cast<std::size_t>(arity), wrapped), {}};
    });
}

int sgrf_field_arity(const sgrf_field* field) {
    return field ? static_cast<int>(field->field.arity()) : 0;
}

sgrf_status sgrf_field_eval(const sgrf_field* field, const double* x, int n, double* out_value) {
    return guarded([&] {
        if (!field || !x || !out_value) throw InvalidArgument("NULL argument");
        *out_value = field->field.eval(Vec(x, x + n));
    });
}

void sgrf_field_free(sgrf_field* field) { delete field; }

int sgrf_builtin_count(void) { return static_cast<int>(builtin_catalog().size()); }

const char* sgrf_builtin_name(int index) {
    const auto& cat = builtin_catalog();
    if (index < 0 || index >= static_cast<int>(cat.size())) {
        set_error("builtin index out of range");
        return nullptr;
    }
    return cat[static_cast<std::size_t>(index)].name.c_str();
}

sgrf_domain* sgrf_builtin_domain(const char* name) {
    return guarded_new<sgrf_domain>([&]() -> sgrf_domain* {
        if (!name) throw InvalidArgument("builtin name is NULL");
        return new sgrf_domain{builtin_problem(name).domain};
    });
}

int sgrf_builtin_roots(const char* name, double* out_roots, int max_roots) {
    try {
        if (!name) throw InvalidArgument("builtin name is NULL");
        const TestProblem& p = builtin_problem(name);
        const int count = static_cast<int>(p.known_roots.size());
        if (out_roots) {
            const int copy = std::min(count, max_roots);
            for (int i = 0; i < copy; ++i)
                for (std::size_t j = 0; j < p.field.arity(); ++j)
                    out_roots[static_cast<std::size_t>(i) * p.field.arity() + j] =
                        p.known_roots[static_cast<std::size_t>(i)][j];
        }
        return count;
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

sgrf_domain* sgrf_domain_box(int n, const double* lower, const double* upper) {
    return guarded_new<sgrf_domain>([&]() -> sgrf_domain* {
        if (n < 1 || !lower || !upper) throw InvalidArgument("invalid box arguments");
        return new sgrf_domain{Domain(Vec(lower, lower + n), Vec(upper, upper + n))};
    });
}

sgrf_status sgrf_domain_add_exclusion(sgrf_domain* domain, const double* center, double radius) {
    return guarded([&] {
        if (!domain || !center) throw InvalidArgument("NULL argument");
        const std::size_t n = domain->domain.dim();
        domain->domain.add_exclusion(ExclusionBall{Vec(center, center + n), radius});
    });
}

int sgrf_domain_dim(const sgrf_domain* domain) {
    return domain ? static_cast<int>(domain->domain.dim()) : 0;
}

int sgrf_domain_contains(const sgrf_domain* domain, const double* x, int n) {
    try {
        if (!domain || !x) throw InvalidArgument("NULL argument");
        return domain->domain.contains(Vec(x, x + n)) ? 1 : 0;
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

double sgrf_domain_volume(const sgrf_domain* domain) {
    return domain ? domain->domain.volume() : 0.0;
}

void sgrf_domain_free(sgrf_domain* domain) { delete domain; }

sgrf_solver* sgrf_solver_new(void) {
    return guarded_new<sgrf_solver>([]() -> sgrf_solver* {
        auto* s = new sgrf_solver;
        s->cfg.density.k = 0; // resolve to default_k at solve time
        return s;
    });
}

sgrf_status sgrf_solver_set_density(sgrf_solver* solver, int k, double eta) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        if (!(eta >= 0.0)) throw InvalidArgument("eta must be non-negative");
        solver->cfg.density.k = k;
        solver->cfg.density.eta = eta;
    });
}

sgrf_status sgrf_solver_set_sampler(sgrf_solver* solver, const char* kind) {
    return guarded([&] {
        if (!solver || !kind) throw InvalidArgument("NULL argument");
        if (std::strcmp(kind, "uniform") == 0)
            solver->cfg.adaptive = false;
        else if (std::strcmp(kind, "adaptive") == 0)
            solver->cfg.adaptive = true;
        else
            throw InvalidArgument("sampler must be 'uniform' or 'adaptive'");
    });
}

sgrf_status sgrf_solver_set_budget(sgrf_solver* solver, int64_t max_samples) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        if (max_samples < 1) throw InvalidArgument("budget must be >= 1");
        solver->cfg.budget = max_samples;
    });
}

sgrf_status sgrf_solver_set_seed(sgrf_solver* solver, uint64_t seed) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        solver->cfg.seed = seed;
    });
}

sgrf_status sgrf_solver_set_adaptive(sgrf_solver* solver, int update_every, int window,
                                     double tol) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        if (update_every > 0) solver->cfg.ad.update_every = update_every;
        if (window > 0) solver->cfg.ad.window = window;
        if (tol > 0.0) solver->cfg.ad.tol = tol;
    });
}

sgrf_status sgrf_solver_set_sigma_floor(sgrf_solver* solver, double floor) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        solver->cfg.ad.sigma_floor = floor;
    });
}

sgrf_status sgrf_solver_set_workers(sgrf_solver* solver, int workers) {
    return guarded([&] {
        if (!solver) throw InvalidArgument("solver is NULL");
        if (workers < 1 || workers > 256) throw InvalidArgument("workers must be in [1, 256]");
        solver->cfg.workers = workers;
    });
}

void sgrf_solver_free(sgrf_solver* solver) { delete solver; }

sgrf_status sgrf_solve(const sgrf_solver* solver, const sgrf_field* field,
                       const sgrf_domain* domain, sgrf_result** out_result) {
    return guarded([&] {
        if (!solver || !field || !domain || !out_result) throw InvalidArgument("NULL argument");
        auto res = std::make_unique<sgrf_result>();
        res->n = domain->domain.dim();
        res->sol = solve(field->field, domain->domain, solver->cfg);
        res->annotated = annotate(res->sol.trace, field->known_roots);
        *out_result = res.release();
    });
}

int sgrf_result_dim(const sgrf_result* result) {
    return result ? static_cast<int>(result->n) : 0;
}

sgrf_status sgrf_result_estimate(const sgrf_result* result, double* out, int n) {
    return guarded([&] {
        if (!result || !out) throw InvalidArgument("NULL argument");
        if (n != static_cast<int>(result->n)) throw ArityMismatch("wrong output length");
        for (int j = 0; j < n; ++j) out[j] = result->sol.estimate[static_cast<std::size_t>(j)];
    });
}

sgrf_status sgrf_result_sigma(const sgrf_result* result, double* out, int n) {
    return guarded([&] {
        if (!result || !out) throw InvalidArgument("NULL argument");
        if (n != static_cast<int>(result->n)) throw ArityMismatch("wrong output length");
        for (int j = 0; j < n; ++j) out[j] = result->sol.sigma[static_cast<std::size_t>(j)];
    });
}

int64_t sgrf_result_samples(const sgrf_result* result) {
    return result ? result->sol.samples : 0;
}

int sgrf_result_converged(const sgrf_result* result) {
    return result && result->sol.converged ? 1 : 0;
}

double sgrf_result_residual(const sgrf_result* result) {
    return result ? result->sol.residual : 0.0;
}

int64_t sgrf_result_trace_rows(const sgrf_result* result) {
    return result ? static_cast<int64_t>(result->sol.trace.size()) : 0;
}

sgrf_status sgrf_result_trace_row(const sgrf_result* result, int64_t row, int64_t* out_samples,
                                  double* out_estimate, double* out_sigma, int n) {
    return guarded([&] {
        if (!result) throw InvalidArgument("result is NULL");
        if (row < 0 || row >= static_cast<int64_t>(result->sol.trace.size()))
            throw InvalidArgument("trace row out of range");
        if (n != static_cast<int>(result->n)) throw ArityMismatch("wrong output length");
        const TraceRow& r = result->sol.trace[static_cast<std::size_t>(row)];
        if (out_samples) *out_samples = r.samples;
        for (int j = 0; j < n; ++j) {
            if (out_estimate) out_estimate[j] = r.estimate[static_cast<std::size_t>(j)];
            if (out_sigma) out_sigma[j] = r.sigma[static_cast<std::size_t>(j)];
        }
    });
}

sgrf_status sgrf_result_write_csv(const sgrf_result* result, const char* path) {
    return guarded([&] {
        if (!result || !path) throw InvalidArgument("NULL argument");
        std::ofstream out(path);
        if (!out) throw Error("cannot open '" + std::string(path) + "' for writing");
        write_trace_csv(out, result->annotated, result->n);
        if (!out.good()) throw Error("write failed for '" + std::string(path) + "'");
    });
}

void sgrf_result_free(sgrf_result* result) { delete result; }

sgrf_status sgrf_find_roots(const sgrf_solver* solver, const sgrf_field* field,
                            const sgrf_domain* domain, int max_roots, double exclusion_radius,
                            double residual_accept, sgrf_roots** out_roots) {
    return guarded([&] {
        if (!solver || !field || !domain || !out_roots) throw InvalidArgument("NULL argument");
        MultirootConfig cfg;
        cfg.max_roots = max_roots;
        cfg.exclusion_radius = exclusion_radius;
        cfg.residual_accept = residual_accept;
        auto out = std::make_unique<sgrf_roots>();
        out->n = domain->domain.dim();
        out->records = find_all(field->field, domain->domain, solver->cfg, cfg);
        *out_roots = out.release();
    });
}

int sgrf_roots_count(const sgrf_roots* roots) {
    return roots ? static_cast<int>(roots->records.size()) : 0;
}

sgrf_status sgrf_roots_location(const sgrf_roots* roots, int index, double* out, int n) {
    return guarded([&] {
        if (!roots || !out) throw InvalidArgument("NULL argument");
        if (index < 0 || index >= static_cast<int>(roots->records.size()))
            throw InvalidArgument("root index out of range");
        if (n != static_cast<int>(roots->n)) throw ArityMismatch("wrong output length");
        const auto& loc = roots->records[static_cast<std::size_t>(index)].location;
        for (int j = 0; j < n; ++j) out[j] = loc[static_cast<std::size_t>(j)];
    });
}

double sgrf_roots_residual(const sgrf_roots* roots, int index) {
    if (!roots || index < 0 || index >= static_cast<int>(roots->records.size())) return -1.0;
    return roots->records[static_cast<std::size_t>(index)].residual;
}

int64_t sgrf_roots_samples(const sgrf_roots* roots, int index) {
    if (!roots || index < 0 || index >= static_cast<int>(roots->records.size())) return -1;
    return roots->records[static_cast<std::size_t>(index)].samples_used;
}

sgrf_status sgrf_roots_sigma(const sgrf_roots* roots, int index, double* out, int n) {
    return guarded([&] {
        if (!roots || !out) throw InvalidArgument("NULL argument");
        if (index < 0 || index >= static_cast<int>(roots->records.size()))
            throw InvalidArgument("root index out of range");
        if (n != static_cast<int>(roots->n)) throw ArityMismatch("wrong output length");
        const auto& sg = roots->records[static_cast<std::size_t>(index)].final_sigma;
        for (int j = 0; j < n; ++j) out[j] = sg[static_cast<std::size_t>(j)];
    });
}

void sgrf_roots_free(sgrf_roots* roots) { delete roots; }

sgrf_status sgrf_experiment_run(const sgrf_solver* solver, const sgrf_field* field,
                                const sgrf_domain* domain, const uint64_t* seeds, int n_seeds,
                                const double* known_roots, int n_roots,
                                sgrf_experiment** out_experiment) {
    return guarded([&] {
        if (!solver || !field || !domain || !seeds || !out_experiment)
            throw InvalidArgument("NULL argument");
        if (n_seeds < 1) throw InvalidArgument("need at least one seed");
        const std::size_t n = domain->domain.dim();
        std::vector<Vec> roots;
        if (known_roots && n_roots > 0) {
            for (int i = 0; i < n_roots; ++i)
                roots.emplace_back(known_roots + static_cast<std::size_t>(i) * n,
                                   known_roots + static_cast<std::size_t>(i + 1) * n);
        } else {
            roots = field->known_roots;
        }
        auto out = std::make_unique<sgrf_experiment>();
        out->n = n;
        out->result = run_experiment(field->field, domain->domain, roots, solver->cfg,
                                     std::vector<std::uint64_t>(seeds, seeds + n_seeds));
        *out_experiment = out.release();
    });
}

int sgrf_experiment_traces(const sgrf_experiment* experiment) {
    return experiment ? static_cast<int>(experiment->result.traces.size()) : 0;
}

sgrf_status sgrf_experiment_write_csv(const sgrf_experiment* experiment, int trace,
                                      const char* path) {
    return guarded([&] {
        if (!experiment || !path) throw InvalidArgument("NULL argument");
        if (trace < 0 || trace >= static_cast<int>(experiment->result.traces.size()))
            throw InvalidArgument("trace index out of range");
        std::ofstream out(path);
        if (!out) throw Error("cannot open '" + std::string(path) + "' for writing");
        write_trace_csv(out, experiment->result.traces[static_cast<std::size_t>(trace)],
                        experiment->n);
        if (!out.good()) throw Error("write failed for '" + std::string(path) + "'");
    });
}

sgrf_status sgrf_experiment_fit(const sgrf_experiment* experiment, const char* model,
                                double* out_slope, double* out_intercept, double* out_r_squared,
                                int64_t* out_fit_first, int64_t* out_fit_last) {
    return guarded([&] {
        if (!experiment || !model) throw InvalidArgument("NULL argument");
        RateFit::Model m;
        if (std::strcmp(model, "power") == 0)
            m = RateFit::Model::Power;
        else if (std::strcmp(model, "exponential") == 0)
            m = RateFit::Model::Exponential;
        else
            throw InvalidArgument("model must be 'power' or 'exponential'");
        const RateFit fit = fit_rate(experiment->result.traces, m);
        if (out_slope) *out_slope = fit.slope;
        if (out_intercept) *out_intercept = fit.intercept;
        if (out_r_squared) *out_r_squared = fit.r_squared;
        if (out_fit_first) *out_fit_first = fit.fit_first;
        if (out_fit_last) *out_fit_last = fit.fit_last;
    });
}

sgrf_status sgrf_eta_floor(const sgrf_solver* solver, const sgrf_field* field,
                           const sgrf_domain* domain, const double* etas, int n_etas,
                           const uint64_t* seeds, int n_seeds, const double* known_roots,
                           int n_roots, double* out_floors) {
    return guarded([&] {
        if (!solver || !field || !domain || !etas || !seeds || !out_floors)
            throw InvalidArgument("NULL argument");
        if (n_etas < 1 || n_seeds < 1) throw InvalidArgument("need etas and seeds");
        const std::size_t n = domain->domain.dim();
        std::vector<Vec> roots;
        if (known_roots && n_roots > 0) {
            for (int i = 0; i < n_roots; ++i)
                roots.emplace_back(known_roots + static_cast<std::size_t>(i) * n,
                                   known_roots + static_cast<std::size_t>(i + 1) * n);
        } else {
            roots = field->known_roots;
        }
        const auto floors =
            eta_floor(field->field, domain->domain, roots, solver->cfg,
                      std::vector<double>(etas, etas + n_etas),
                      std::vector<std::uint64_t>(seeds, seeds + n_seeds));
        for (std::size_t i = 0; i < floors.size(); ++i) out_floors[i] = floors[i].second;
    });
}

void sgrf_experiment_free(sgrf_experiment* experiment) { delete experiment; }

int sgrf_default_k(int n, int multiplicity) {
    try {
        return default_k(n, multiplicity);
    } catch (const std::exception& e) {
        set_error(e.what());
        return -1;
    }
}

const char* sgrf_version(void) { return "1.0.0"; }

} // extern "C"
