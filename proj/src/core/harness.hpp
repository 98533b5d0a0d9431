#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "samplers.hpp"

namespace sgrf {

struct ConvergenceRow {
    std::int64_t samples = 0;
    Vec estimate;
    Vec sigma;
    std::optional<double> error; // ||estimate - nearest known root||_2
};
using ConvergenceTrace = std::vector<ConvergenceRow>;

struct RateFit {
    enum class Model { Power, Exponential };
    Model model = Model::Power;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::int64_t fit_first = 0; // sample counts bounding the fitted region
    std::int64_t fit_last = 0;
};

struct ExperimentResult {
    std::vector<ConvergenceTrace> traces;       // one per seed, in seed order
    std::vector<std::string> per_seed_errors;   // empty string = seed succeeded
};

// One solver run per seed; error column filled when known roots are given.
ExperimentResult run_experiment(const ScalarField& field, const Domain& domain,
                                const std::vector<Vec>& known_roots, const SolverConfig& cfg,
                                const std::vector<std::uint64_t>& seeds);

// Median error across traces at each checkpoint, carrying the last value of
// stopped runs forward. Rows must carry errors.
std::vector<std::pair<std::int64_t, double>> median_error_curve(
    const std::vector<ConvergenceTrace>& traces);

// Least squares on the median curve: power = ln err vs ln N, exponential =
// ln err vs N with the eta-floor plateau excluded (first checkpoint after
// which the median stays within 3x of its final value ends the fit).
RateFit fit_rate(const std::vector<ConvergenceTrace>& traces, RateFit::Model model);
RateFit fit_rate_curve(const std::vector<std::pair<std::int64_t, double>>& curve,
                       RateFit::Model model);

// Median final error per eta after a fixed budget, in input order.
std::vector<std::pair<double, double>> eta_floor(const ScalarField& field, const Domain& domain,
                                                 const std::vector<Vec>& known_roots,
                                                 const SolverConfig& cfg,
                                                 const std::vector<double>& etas,
                                                 const std::vector<std::uint64_t>& seeds);

// CSV schema: samples,estimate_1..n,sigma_1..n,error (17 significant digits,
// error blank when unknown).
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace, std::size_t n);
std::string trace_csv_string(const ConvergenceTrace& trace, std::size_t n);
ConvergenceTrace read_trace_csv(std::istream& in, std::size_t n);

double median(std::vector<double> values);

// Trace of a single solve annotated with errors against known roots.
ConvergenceTrace annotate(const Trace& trace, const std::vector<Vec>& known_roots);

} // namespace sgrf
