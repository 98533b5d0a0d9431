#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace sgrf {

namespace {

double nearest_root_distance(const Vec& x, const std::vector<Vec>& roots) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - r[j];
            d2 += d * d;
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct LinFit {
    double slope, intercept, r2;
};

LinFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t m = xs.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("degenerate abscissa in rate fit");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pred = slope * xs[i] + intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - my) * (ys[i] - my);
    }
    const double r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return {slope, intercept, r2};
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw InsufficientData("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

ConvergenceTrace annotate(const Trace& trace, const std::vector<Vec>& known_roots) {
    ConvergenceTrace out;
    out.reserve(trace.size());
    for (const auto& row : trace) {
        ConvergenceRow r;
        r.samples = row.samples;
        r.estimate = row.estimate;
        r.sigma = row.sigma;
        if (!known_roots.empty()) r.error = nearest_root_distance(row.estimate, known_roots);
        out.push_back(std::move(r));
    }
    return out;
}

ExperimentResult run_experiment(const ScalarField& field, const Domain& domain,
                                const std::vector<Vec>& known_roots, const SolverConfig& cfg,
                                const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw InvalidArgument("experiment requires at least one seed");
    ExperimentResult res;
    res.traces.resize(seeds.size());
    res.per_seed_errors.resize(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        SolverConfig c = cfg;
        c.seed = seeds[i];
        try {
            const SolveResult sol = solve(field, domain, c);
            res.traces[i] = annotate(sol.trace, known_roots);
        } catch (const Error& e) {
            res.per_seed_errors[i] = e.what();
        }
    }
    return res;
}

std::vector<std::pair<std::int64_t, double>> median_error_curve(
    const std::vector<ConvergenceTrace>& traces) {
    std::vector<std::int64_t> grid;
    for (const auto& t : traces)
        for (const auto& row : t) grid.push_back(row.samples);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty()) throw InsufficientData("no checkpoints in traces");

    // One cursor per trace: the last row at or before the current grid point.
    std::vector<std::size_t> cursor(traces.size(), 0);
    std::vector<std::pair<std::int64_t, double>> curve;
    std::vector<double> errs;
    for (const std::int64_t s : grid) {
        errs.clear();
        for (std::size_t t = 0; t < traces.size(); ++t) {
            const auto& rows = traces[t];
            while (cursor[t] + 1 < rows.size() && rows[cursor[t] + 1].samples <= s) ++cursor[t];
            if (!rows.empty() && rows[cursor[t]].samples <= s && rows[cursor[t]].error)
                errs.push_back(*rows[cursor[t]].error);
        }
        if (errs.size() == traces.size()) curve.emplace_back(s, median(errs));
    }
    if (curve.empty()) throw InsufficientData("traces carry no common error checkpoints");
    return curve;
}

RateFit fit_rate_curve(const std::vector<std::pair<std::int64_t, double>>& curve,
                       RateFit::Model model) {
    std::vector<std::pair<std::int64_t, double>> rows;
    for (const auto& [s, e] : curve)
        if (e > 0.0) rows.emplace_back(s, e);

    std::size_t end = rows.size();
    if (model == RateFit::Model::Exponential && !rows.empty()) {
        // Exclude the eta-floor plateau: fit up to the first checkpoint after
        // which the median error stays within 3x of its final value.
        const double threshold = 3.0 * rows.back().second;
        std::vector<double> suffix_max(rows.size());
        double running = 0.0;
        for (std::size_t i = rows.size(); i-- > 0;) {
            running = std::max(running, rows[i].second);
            suffix_max[i] = running;
        }
        std::size_t onset = rows.size() - 1;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (suffix_max[i] <= threshold) {
                onset = i;
                break;
            }
        end = onset + 1;
    }
    if (end < 10) throw InsufficientData("need >= 10 positive-error checkpoints for a rate fit");

    std::vector<double> xs, ys;
    xs.reserve(end);
    ys.reserve(end);
    for (std::size_t i = 0; i < end; ++i) {
        xs.push_back(model == RateFit::Model::Power
                         ? std::log(static_cast<double>(rows[i].first))
                         : static_cast<double>(rows[i].first));
        ys.push_back(std::log(rows[i].second));
    }
    const LinFit f = least_squares(xs, ys);
    RateFit out;
    out.model = model;
    out.slope = f.slope;
    out.intercept = f.intercept;
    out.r_squared = std::clamp(f.r2, 0.0, 1.0);
    out.fit_first = rows.front().first;
    out.fit_last = rows[end - 1].first;
    return out;
}

RateFit fit_rate(const std::vector<ConvergenceTrace>& traces, RateFit::Model model) {
    return fit_rate_curve(median_error_curve(traces), model);
}

std::vector<std::pair<double, double>> eta_floor(const ScalarField& field, const Domain& domain,
                                                 const std::vector<Vec>& known_roots,
                                                 const SolverConfig& cfg,
                                                 const std::vector<double>& etas,
                                                 const std::vector<std::uint64_t>& seeds) {
    if (etas.empty()) throw InvalidArgument("eta list must be non-empty");
    if (seeds.empty()) throw InvalidArgument("eta floor requires at least one seed");
    if (known_roots.empty()) throw InvalidArgument("eta floor requires known roots");
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (!(etas[i] > 0.0)) throw InvalidArgument("etas must be positive");
        for (std::size_t j = i + 1; j < etas.size(); ++j)
            if (etas[i] == etas[j]) throw InvalidArgument("etas must be distinct");
    }
    std::vector<std::pair<double, double>> out;
    for (const double eta : etas) {
        std::vector<double> finals;
        for (const std::uint64_t seed : seeds) {
            SolverConfig c = cfg;
            c.seed = seed;
            c.density.eta = eta;
            const SolveResult sol = solve(field, domain, c);
            finals.push_back(nearest_root_distance(sol.estimate, known_roots));
        }
        out.emplace_back(eta, median(std::move(finals)));
    }
    return out;
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace, std::size_t n) {
    out << "samples";
    for (std::size_t j = 1; j <= n; ++j) out << ",estimate_" << j;
    for (std::size_t j = 1; j <= n; ++j) out << ",sigma_" << j;
    out << ",error\n";
    for (const auto& row : trace) {
        out << row.samples;
        for (std::size_t j = 0; j < n; ++j) out << ',' << fmt17(row.estimate[j]);
        for (std::size_t j = 0; j < n; ++j) out << ',' << fmt17(row.sigma[j]);
        out << ',';
        if (row.error) out << fmt17(*row.error);
        out << '\n';
    }
}

std::string trace_csv_string(const ConvergenceTrace& trace, std::size_t n) {
    std::ostringstream ss;
    write_trace_csv(ss, trace, n);
    return ss.str();
}

ConvergenceTrace read_trace_csv(std::istream& in, std::size_t n) {
    ConvergenceTrace out;
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("trace CSV is empty");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (cells.size() != 2 * n + 2)
            throw InvalidArgument("trace CSV row has wrong column count");
        ConvergenceRow row;
        row.samples = std::stoll(cells[0]);
        row.estimate.resize(n);
        row.sigma.resize(n);
        for (std::size_t j = 0; j < n; ++j) row.estimate[j] = std::stod(cells[1 + j]);
        for (std::size_t j = 0; j < n; ++j) row.sigma[j] = std::stod(cells[1 + n + j]);
        if (!cells[2 * n + 1].empty()) row.error = std::stod(cells[2 * n + 1]);
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace sgrf
