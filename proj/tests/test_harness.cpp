#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/field.hpp"
#include "core/harness.hpp"

using namespace sgrf;

namespace {

ConvergenceRow row(std::int64_t samples, Vec estimate, Vec sigma, std::optional<double> error) {
    ConvergenceRow r;
    r.samples = samples;
    r.estimate = std::move(estimate);
    r.sigma = std::move(sigma);
    r.error = error;
    return r;
}

std::vector<std::pair<std::int64_t, double>> synthetic_curve(std::int64_t step, std::int64_t last,
                                                             double (*err)(double)) {
    std::vector<std::pair<std::int64_t, double>> curve;
    for (std::int64_t s = step; s <= last; s += step)
        curve.emplace_back(s, err(static_cast<double>(s)));
    return curve;
}

} // namespace

TEST_CASE("median: odd, even, empty") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({7.0}) == 7.0);
    CHECK_THROWS_AS(median({}), InsufficientData);
}

TEST_CASE("annotate: nearest known root, blank when unknown") {
    Trace t;
    t.push_back({100, {0.31}, {0.1}});
    t.push_back({200, {0.79}, {0.05}});
    t.push_back({300, {0.55}, {0.02}});
    const std::vector<Vec> roots = {{0.3}, {0.8}};
    const ConvergenceTrace a = annotate(t, roots);
    REQUIRE(a.size() == 3);
    CHECK(*a[0].error == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(*a[1].error == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(*a[2].error == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(a[0].samples == 100);
    CHECK(a[0].estimate == Vec{0.31});
    CHECK(a[0].sigma == Vec{0.1});

    const ConvergenceTrace blank = annotate(t, {});
    for (const auto& r : blank) CHECK(!r.error.has_value());
}

TEST_CASE("power fit recovers an exact power law") {
    // error = N^-1 => ln err = -1 * ln N, intercept 0.
    const auto curve = synthetic_curve(10, 200, +[](double s) { return 1.0 / s; });
    const RateFit fit = fit_rate_curve(curve, RateFit::Model::Power);
    CHECK(fit.model == RateFit::Model::Power);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::fabs(fit.intercept) <= 1e-9);
    CHECK(fit.r_squared >= 1.0 - 1e-9);
    CHECK(fit.fit_first == 10);
    CHECK(fit.fit_last == 200);
}

TEST_CASE("exponential fit recovers rate and intercept") {
    // error = 5 exp(-0.01 N) => slope -0.01, intercept ln 5.
    const auto curve = synthetic_curve(10, 1000, +[](double s) { return 5.0 * std::exp(-0.01 * s); });
    const RateFit fit = fit_rate_curve(curve, RateFit::Model::Exponential);
    CHECK(fit.slope == doctest::Approx(-0.01).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-9));
    CHECK(fit.r_squared >= 1.0 - 1e-9);
    CHECK(fit.fit_first == 10);
    // Plateau scan: final error 5e^-10, threshold 3x => onset at N = 900.
    CHECK(fit.fit_last == 900);
}

TEST_CASE("exponential fit excludes a hard floor plateau") {
    // Clean decay into a flat floor: the flat tail must not drag the slope.
    const auto curve =
        synthetic_curve(10, 1000, +[](double s) { return std::max(std::exp(-0.05 * s), 1e-3); });
    const RateFit fit = fit_rate_curve(curve, RateFit::Model::Exponential);
    // threshold = 3e-3; exp(-0.05 N) <= 3e-3 first at N = 120, well before the
    // floor bites at N = 140, so the fitted range is pure exponential.
    CHECK(fit.fit_last == 120);
    CHECK(fit.slope == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK(fit.r_squared >= 1.0 - 1e-9);
}

TEST_CASE("rate fit requires ten positive checkpoints") {
    auto curve = synthetic_curve(10, 90, +[](double s) { return 1.0 / s; }); // 9 rows
    CHECK_THROWS_AS(fit_rate_curve(curve, RateFit::Model::Power), InsufficientData);
    // Zero errors are filtered out before counting.
    std::vector<std::pair<std::int64_t, double>> zeros;
    for (int i = 1; i <= 50; ++i) zeros.emplace_back(i, 0.0);
    CHECK_THROWS_AS(fit_rate_curve(zeros, RateFit::Model::Power), InsufficientData);
    CHECK_THROWS_AS(fit_rate_curve(zeros, RateFit::Model::Exponential), InsufficientData);
}

TEST_CASE("median curve: union grid, carry-forward, all-traces rule") {
    std::vector<ConvergenceTrace> traces(2);
    traces[0] = {row(5, {0.0}, {1.0}, 0.5), row(10, {0.0}, {1.0}, 0.4),
                 row(15, {0.0}, {1.0}, 0.3)};
    traces[1] = {row(4, {0.0}, {1.0}, 0.45), row(8, {0.0}, {1.0}, 0.35),
                 row(12, {0.0}, {1.0}, 0.25), row(16, {0.0}, {1.0}, 0.15)};
    const auto curve = median_error_curve(traces);
    // s=4 is dropped: the first trace has no checkpoint yet.
    const std::vector<std::pair<std::int64_t, double>> expect = {
        {5, 0.475}, {8, 0.425}, {10, 0.375}, {12, 0.325}, {15, 0.275}, {16, 0.225}};
    REQUIRE(curve.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(curve[i].first == expect[i].first);
        CHECK(curve[i].second == doctest::Approx(expect[i].second).epsilon(1e-12));
    }
}

TEST_CASE("median curve: no error columns -> insufficient data") {
    std::vector<ConvergenceTrace> traces(1);
    for (int i = 1; i <= 5; ++i) traces[0].push_back(row(i, {0.0}, {1.0}, std::nullopt));
    CHECK_THROWS_AS(median_error_curve(traces), InsufficientData);
    CHECK_THROWS_AS(median_error_curve(std::vector<ConvergenceTrace>{}), InsufficientData);
}

TEST_CASE("fit_rate composes the curve and the fit") {
    std::vector<ConvergenceTrace> traces(1);
    for (std::int64_t s = 10; s <= 200; s += 10)
        traces[0].push_back(row(s, {0.0}, {1.0}, 1.0 / static_cast<double>(s)));
    const RateFit fit = fit_rate(traces, RateFit::Model::Power);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("trace CSV: header, formatting, exact round trip") {
    ConvergenceTrace t;
    t.push_back(row(5, {0.1, 0.2}, {1.5, 2.5}, 0.3));
    t.push_back(row(10, {1.0 / 3.0, -0.7071067811865476}, {1e-12, 3.25}, std::nullopt));
    t.push_back(row(15, {0.6, 0.4}, {0.5, 0.25}, 1.2345678901234567e-9));

    const std::string csv = trace_csv_string(t, 2);
    std::istringstream first_line(csv);
    std::string header;
    std::getline(first_line, header);
    CHECK(header == "samples,estimate_1,estimate_2,sigma_1,sigma_2,error");

    std::istringstream in(csv);
    const ConvergenceTrace back = read_trace_csv(in, 2);
    REQUIRE(back.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(back[i].samples == t[i].samples);
        // %.17g is exact for doubles: the round trip must be bitwise.
        CHECK(back[i].estimate == t[i].estimate);
        CHECK(back[i].sigma == t[i].sigma);
        CHECK(back[i].error.has_value() == t[i].error.has_value());
        if (t[i].error) CHECK(*back[i].error == *t[i].error);
    }
    // Re-serialization is byte-identical.
    CHECK(trace_csv_string(back, 2) == csv);
}

TEST_CASE("trace CSV: malformed input") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_trace_csv(empty, 1), InvalidArgument);
    std::istringstream header_only("samples,estimate_1,sigma_1,error\n");
    CHECK(read_trace_csv(header_only, 1).empty());
    std::istringstream short_row("samples,estimate_1,sigma_1,error\n5,0.5\n");
    CHECK_THROWS_AS(read_trace_csv(short_row, 1), InvalidArgument);
}

TEST_CASE("run_experiment: traces per seed, clean error capture") {
    const TestProblem& prob = builtin_problem("abs_1d");
    SolverConfig cfg;
    cfg.adaptive = true;
    cfg.density = {1, 1e-8};
    cfg.budget = 2000;
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    const ExperimentResult res = run_experiment(prob.field, prob.domain, prob.known_roots, cfg, seeds);
    REQUIRE(res.traces.size() == 3);
    REQUIRE(res.per_seed_errors.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(res.per_seed_errors[i].empty());
        REQUIRE(!res.traces[i].empty());
        for (const auto& r : res.traces[i]) CHECK(r.error.has_value());
        CHECK(*res.traces[i].back().error <= 1e-3);
    }

    CHECK_THROWS_AS(run_experiment(prob.field, prob.domain, prob.known_roots, cfg, {}), InvalidArgument);

    // A config that every solve rejects is reported per seed, not thrown.
    SolverConfig bad = cfg;
    bad.density.eta = 0.0;
    const ExperimentResult failed =
        run_experiment(prob.field, prob.domain, prob.known_roots, bad, seeds);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(!failed.per_seed_errors[i].empty());
        CHECK(failed.traces[i].empty());
    }
}

TEST_CASE("eta_floor: validation and monotone floors") {
    const TestProblem& prob = builtin_problem("abs_1d");
    SolverConfig cfg;
    cfg.adaptive = true;
    cfg.density = {1, 1e-8};
    cfg.budget = 5000;
    const std::vector<std::uint64_t> seeds = {1, 2, 3};

    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {}, seeds),
                    InvalidArgument);
    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {1e-2}, {}),
                    InvalidArgument);
    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, {}, cfg, {1e-2}, seeds), InvalidArgument);
    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {1e-2, -1.0}, seeds),
                    InvalidArgument);
    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {0.0}, seeds),
                    InvalidArgument);
    CHECK_THROWS_AS(eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {1e-2, 1e-2}, seeds),
                    InvalidArgument);

    const auto floors =
        eta_floor(prob.field, prob.domain, prob.known_roots, cfg, {1e-2, 1e-8}, seeds);
    REQUIRE(floors.size() == 2);
    CHECK(floors[0].first == 1e-2);
    CHECK(floors[1].first == 1e-8);
    CHECK(floors[0].second > floors[1].second);
}
