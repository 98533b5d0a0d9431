#include "field.hpp"

#include <cmath>

namespace sgrf {

double ScalarField::eval(const Vec& x) const {
    if (x.size() != arity_)
        throw ArityMismatch("expected " + std::to_string(arity_) + " coordinates, got " +
                            std::to_string(x.size()));
    const double v = fn_(x);
    if (!std::isfinite(v)) throw NonFiniteValue("field evaluated to a non-finite value");
    return v;
}

double TestProblem::error_of(const Vec& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& root : known_roots) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = x[j] - root[j];
            d2 += d * d;
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

namespace {

Domain unit_box(std::size_t n) { return Domain(Vec(n, 0.0), Vec(n, 1.0)); }

TestProblem sphere_nd(std::size_t n) {
    Vec root(n, 0.6);
    return TestProblem{
        "sphere_" + std::to_string(n) + "d",
        ScalarField(n,
                    [](const Vec& x) {
                        double d2 = 0.0;
                        for (double xi : x) {
                            const double d = xi - 0.6;
                            d2 += d * d;
                        }
                        return std::sqrt(d2);
                    }),
        unit_box(n),
        {root},
        1};
}

std::vector<TestProblem> make_catalog() {
    std::vector<TestProblem> c;
    c.push_back(TestProblem{"abs_1d",
                            ScalarField(1, [](const Vec& x) { return std::fabs(x[0] - 0.6); }),
                            unit_box(1),
                            {{0.6}},
                            1});
    c.push_back(TestProblem{
        "osc_1d",
        ScalarField(1,
                    [](const Vec& x) {
                        return std::fabs(x[0] - 0.6) * (2.0 + std::sin(40.0 * x[0]));
                    }),
        unit_box(1),
        {{0.6}},
        1});
    c.push_back(TestProblem{
        "kink_1d",
        ScalarField(1, [](const Vec& x) { return std::sqrt(std::fabs(x[0] - 0.6)); }),
        unit_box(1),
        {{0.6}},
        1});
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{5}})
        c.push_back(sphere_nd(n));
    c.push_back(TestProblem{
        "two_roots_1d",
        ScalarField(1,
                    [](const Vec& x) {
                        return std::fabs(x[0] - 0.3) * std::fabs(x[0] - 0.8);
                    }),
        unit_box(1),
        {{0.3}, {0.8}},
        1});
    return c;
}

} // namespace

const std::vector<TestProblem>& builtin_catalog() {
    static const std::vector<TestProblem> catalog = make_catalog();
    return catalog;
}

const TestProblem& builtin_problem(const std::string& name) {
    for (const auto& p : builtin_catalog())
        if (p.name == name) return p;
    throw UnknownBuiltin("no builtin named '" + name + "'");
}

} // namespace sgrf
