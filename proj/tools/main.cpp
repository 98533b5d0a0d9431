// sgrf command-line tool: single-root solve, multi-root discovery, and
// convergence experiments over the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgrf/sgrf.h"

namespace {

using json = nlohmann::json;

struct Options {
    std::string function;
    std::string domain;
    std::string sampler = "adaptive";
    int k = 0; // 0 -> default_k for the dimension
    double eta = 1e-8;
    int update_every = 5;
    int window = 0; // 0 -> 10 * dimension
    double tol = 1e-9;
    double sigma_floor = 0.0; // <= 0 -> 1e-12 * range
    std::int64_t max_samples = 10000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 1;
    std::string trace_path;
    std::string report_path;
    // multiroot
    int max_roots = 8;
    double exclusion_radius = 0.0; // <= 0 -> 0.05 * box diagonal
    double residual_accept = 1e-6;
    // experiment
    int seeds = 10;
    std::string model = "exponential";
    std::string etas;
    std::string trace_dir;
};

[[noreturn]] void fail(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(1);
}

void check(sgrf_status status) {
    if (status != SGRF_OK) fail(sgrf_last_error());
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') fail("malformed " + what + " '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

// "0,1;0,1" -> box with lower (0,0), upper (1,1).
sgrf_domain* parse_domain(const std::string& text) {
    std::vector<double> lower, upper;
    for (const std::string& part : split(text, ';')) {
        const auto bounds = split(part, ',');
        if (bounds.size() != 2) fail("malformed domain segment '" + part + "'");
        lower.push_back(parse_number(bounds[0], "domain bound"));
        upper.push_back(parse_number(bounds[1], "domain bound"));
    }
    sgrf_domain* dom = sgrf_domain_box(static_cast<int>(lower.size()), lower.data(), upper.data());
    if (!dom) fail(sgrf_last_error());
    return dom;
}

struct Problem {
    sgrf_field* field = nullptr;
    sgrf_domain* domain = nullptr;
};

// Resolve --function/--domain into handles. Builtins default to their own
// domain; expressions take their arity from the domain dimension and warn
// about declared-but-unused variables.
Problem make_problem(const Options& opt) {
    Problem p;
    const std::string& spec = opt.function;
    if (spec.rfind("builtin:", 0) == 0) {
        const std::string name = spec.substr(8);
        p.field = sgrf_field_builtin(name.c_str());
        if (!p.field) fail(sgrf_last_error());
        p.domain = opt.domain.empty() ? sgrf_builtin_domain(name.c_str())
                                      : parse_domain(opt.domain);
        if (!p.domain) fail(sgrf_last_error());
    } else if (spec.rfind("expr:", 0) == 0) {
        if (opt.domain.empty()) fail("--domain is required for expression functions");
        p.domain = parse_domain(opt.domain);
        const std::string text = spec.substr(5);
        const int n = sgrf_domain_dim(p.domain);
        p.field = sgrf_field_expr(text.c_str(), n);
        if (!p.field) fail(sgrf_last_error());
        std::vector<int> used(static_cast<std::size_t>(n), 0);
        check(sgrf_expr_used(text.c_str(), n, used.data()));
        for (int i = 0; i < n; ++i)
            if (!used[static_cast<std::size_t>(i)])
                std::cerr << "warning: variable x" << (i + 1)
                          << " is unused by the expression\n";
    } else {
        fail("--function must be builtin:<name> or expr:<text>");
    }
    return p;
}

sgrf_solver* make_solver(const Options& opt) {
    sgrf_solver* s = sgrf_solver_new();
    if (!s) fail(sgrf_last_error());
    check(sgrf_solver_set_density(s, opt.k, opt.eta));
    check(sgrf_solver_set_sampler(s, opt.sampler.c_str()));
    check(sgrf_solver_set_budget(s, opt.max_samples));
    check(sgrf_solver_set_seed(s, opt.seed));
    check(sgrf_solver_set_adaptive(s, opt.update_every, opt.window, opt.tol));
    check(sgrf_solver_set_sigma_floor(s, opt.sigma_floor));
    check(sgrf_solver_set_workers(s, opt.workers));
    return s;
}

void resolve_seed(Options& opt) {
    if (!opt.seed_given) {
        std::random_device entropy;
        opt.seed = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    }
    std::printf("seed=%" PRIu64 "\n", opt.seed);
}

void write_report(const Options& opt, const json& report) {
    if (opt.report_path.empty()) return;
    std::ofstream out(opt.report_path);
    if (!out) fail("cannot open report file '" + opt.report_path + "'");
    out << report.dump(2) << "\n";
}

int run_solve(Options& opt) {
    resolve_seed(opt);
    const Problem p = make_problem(opt);
    sgrf_solver* solver = make_solver(opt);

    sgrf_result* result = nullptr;
    check(sgrf_solve(solver, p.field, p.domain, &result));

    const int n = sgrf_result_dim(result);
    std::vector<double> root(static_cast<std::size_t>(n)), sigma(static_cast<std::size_t>(n));
    check(sgrf_result_estimate(result, root.data(), n));
    check(sgrf_result_sigma(result, sigma.data(), n));
    const std::int64_t samples = sgrf_result_samples(result);
    const double residual = sgrf_result_residual(result);
    const bool converged = sgrf_result_converged(result) != 0;

    std::printf("root=%s residual=%s samples=%" PRId64 " sigma=%s\n", join(root).c_str(),
                fmt(residual).c_str(), samples, join(sigma).c_str());

    if (!opt.trace_path.empty()) check(sgrf_result_write_csv(result, opt.trace_path.c_str()));
    write_report(opt, json{{"mode", "solve"},
                           {"seed", opt.seed},
                           {"root", root},
                           {"residual", residual},
                           {"samples", samples},
                           {"sigma", sigma},
                           {"converged", converged}});

    sgrf_result_free(result);
    sgrf_solver_free(solver);
    sgrf_field_free(p.field);
    sgrf_domain_free(p.domain);
    return converged ? 0 : 2;
}

int run_multiroot(Options& opt) {
    resolve_seed(opt);
    const Problem p = make_problem(opt);
    sgrf_solver* solver = make_solver(opt);

    sgrf_roots* roots = nullptr;
    check(sgrf_find_roots(solver, p.field, p.domain, opt.max_roots, opt.exclusion_radius,
                          opt.residual_accept, &roots));

    const int n = sgrf_domain_dim(p.domain);
    const int count = sgrf_roots_count(roots);
    json entries = json::array();
    for (int i = 0; i < count; ++i) {
        std::vector<double> loc(static_cast<std::size_t>(n)), sigma(static_cast<std::size_t>(n));
        check(sgrf_roots_location(roots, i, loc.data(), n));
        check(sgrf_roots_sigma(roots, i, sigma.data(), n));
        const double residual = sgrf_roots_residual(roots, i);
        const std::int64_t samples = sgrf_roots_samples(roots, i);
        std::printf("root=%s residual=%s samples=%" PRId64 " sigma=%s\n", join(loc).c_str(),
                    fmt(residual).c_str(), samples, join(sigma).c_str());
        entries.push_back(json{{"location", loc},
                               {"residual", residual},
                               {"samples", samples},
                               {"sigma", sigma}});
    }
    std::printf("roots=%d\n", count);
    write_report(opt, json{{"mode", "multiroot"},
                           {"seed", opt.seed},
                           {"count", count},
                           {"roots", entries}});

    sgrf_roots_free(roots);
    sgrf_solver_free(solver);
    sgrf_field_free(p.field);
    sgrf_domain_free(p.domain);
    return 0;
}

int run_experiment(Options& opt) {
    resolve_seed(opt);
    const Problem p = make_problem(opt);
    sgrf_solver* solver = make_solver(opt);

    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(opt.seeds));
    for (int i = 0; i < opt.seeds; ++i)
        seeds[static_cast<std::size_t>(i)] = opt.seed + static_cast<std::uint64_t>(i);
    std::string seed_list;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seed_list += (i ? "," : "") + std::to_string(seeds[i]);
    std::printf("seeds=%s\n", seed_list.c_str());

    json report;
    if (!opt.etas.empty()) {
        std::vector<double> etas;
        for (const std::string& part : split(opt.etas, ','))
            etas.push_back(parse_number(part, "eta"));
        std::vector<double> floors(etas.size());
        check(sgrf_eta_floor(solver, p.field, p.domain, etas.data(),
                             static_cast<int>(etas.size()), seeds.data(),
                             static_cast<int>(seeds.size()), nullptr, 0, floors.data()));
        json pairs = json::array();
        for (std::size_t i = 0; i < etas.size(); ++i) {
            pairs.push_back(json::array({etas[i], floors[i]}));
            std::printf("eta=%s floor=%s\n", fmt(etas[i]).c_str(), fmt(floors[i]).c_str());
        }
        report = json{{"mode", "experiment"}, {"seeds", seeds}, {"eta_floor", pairs}};
    } else {
        sgrf_experiment* exp = nullptr;
        check(sgrf_experiment_run(solver, p.field, p.domain, seeds.data(),
                                  static_cast<int>(seeds.size()), nullptr, 0, &exp));
        if (!opt.trace_dir.empty()) {
            for (int i = 0; i < sgrf_experiment_traces(exp); ++i) {
                const std::string path = opt.trace_dir + "/trace_" +
                                         std::to_string(seeds[static_cast<std::size_t>(i)]) +
                                         ".csv";
                check(sgrf_experiment_write_csv(exp, i, path.c_str()));
            }
        }
        double slope = 0.0, intercept = 0.0, r2 = 0.0;
        std::int64_t first = 0, last = 0;
        check(sgrf_experiment_fit(exp, opt.model.c_str(), &slope, &intercept, &r2, &first,
                                  &last));
        report = json{{"mode", "experiment"},     {"seeds", seeds},
                      {"model", opt.model},       {"slope", slope},
                      {"intercept", intercept},   {"r_squared", r2},
                      {"fit_range", json::array({first, last})}};
        sgrf_experiment_free(exp);
    }
    std::cout << report.dump() << "\n";
    write_report(opt, report);

    sgrf_solver_free(solver);
    sgrf_field_free(p.field);
    sgrf_domain_free(p.domain);
    return 0;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--function", opt.function,
                    "function spec: builtin:<name> or expr:<text>")
        ->required();
    cmd->add_option("--domain", opt.domain,
                    "box as 'lo,hi;lo,hi;...' (defaults to the builtin's domain)");
    cmd->add_option("--sampler", opt.sampler, "sampling strategy: uniform | adaptive")
        ->default_val("adaptive");
    cmd->add_option("--k", opt.k, "density exponent; 0 selects the dimension default")
        ->default_val(0);
    cmd->add_option("--eta", opt.eta, "density regularizer")->default_val(1e-8);
    cmd->add_option("--update-every", opt.update_every, "samples between proposal updates")
        ->default_val(5);
    cmd->add_option("--window", opt.window, "sigma averaging window; 0 selects 10*dimension")
        ->default_val(0);
    cmd->add_option("--tol", opt.tol, "stop when max sigma falls below this")
        ->default_val(1e-9);
    cmd->add_option("--sigma-floor", opt.sigma_floor,
                    "absolute sigma floor; 0 selects 1e-12*range")
        ->default_val(0.0);
    cmd->add_option("--max-samples", opt.max_samples, "total sampling budget")
        ->default_val(10000);
    cmd->add_option("--seed", opt.seed, "RNG seed (drawn from entropy when omitted)");
    cmd->add_option("--workers", opt.workers, "parallel accumulator workers")
        ->default_val(1);
    cmd->add_option("--trace", opt.trace_path, "write the convergence trace CSV here");
    cmd->add_option("--report", opt.report_path, "write a JSON report here");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sgrf: stochastic global root finder (center of mass of 1/(f^2+eta^2)^k)"};
    app.require_subcommand(1);

    Options solve_opt, multi_opt, exp_opt;

    CLI::App* solve_cmd = app.add_subcommand("solve", "locate a single root");
    add_common(solve_cmd, solve_opt);

    CLI::App* multi_cmd = app.add_subcommand("multiroot", "discover all roots sequentially");
    add_common(multi_cmd, multi_opt);
    multi_cmd->add_option("--max-roots", multi_opt.max_roots, "stop after this many roots")
        ->default_val(8);
    multi_cmd
        ->add_option("--exclusion-radius", multi_opt.exclusion_radius,
                     "ball radius carved around each accepted root; 0 selects 5% of the "
                     "box diagonal")
        ->default_val(0.0);
    multi_cmd
        ->add_option("--residual-accept", multi_opt.residual_accept,
                     "largest |f| accepted as a root")
        ->default_val(1e-6);

    CLI::App* exp_cmd =
        app.add_subcommand("experiment", "convergence-rate and eta-floor studies");
    add_common(exp_cmd, exp_opt);
    exp_cmd->add_option("--seeds", exp_opt.seeds, "number of consecutive seeds to run")
        ->default_val(10)
        ->check(CLI::PositiveNumber);
    exp_cmd->add_option("--model", exp_opt.model, "rate model: power | exponential")
        ->default_val("exponential");
    exp_cmd->add_option("--etas", exp_opt.etas,
                        "comma-separated eta list: report the error floor per eta");
    exp_cmd->add_option("--trace-dir", exp_opt.trace_dir,
                        "write one trace CSV per seed into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            solve_opt.seed_given = solve_cmd->count("--seed") > 0;
            return run_solve(solve_opt);
        }
        if (multi_cmd->parsed()) {
            multi_opt.seed_given = multi_cmd->count("--seed") > 0;
            return run_multiroot(multi_opt);
        }
        exp_opt.seed_given = exp_cmd->count("--seed") > 0;
        return run_experiment(exp_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
