#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"

namespace sgrf {

// Evaluatable scalar function on R^n. Immutable after construction; eval must
// be deterministic and finite inside the associated domain.
class ScalarField {
public:
    ScalarField(std::size_t arity, std::function<double(const Vec&)> fn)
        : arity_(arity), fn_(std::move(fn)) {
        if (arity_ == 0) throw InvalidArgument("field arity must be >= 1");
        if (!fn_) throw InvalidArgument("field evaluator must be callable");
    }

    std::size_t arity() const { return arity_; }

    double eval(const Vec& x) const;

private:
    std::size_t arity_;
    std::function<double(const Vec&)> fn_;
};

struct TestProblem {
    std::string name;
    ScalarField field;
    Domain domain;
    std::vector<Vec> known_roots;
    int multiplicity = 1; // the m in f^2 ~ |x - root|^(2m) near each root

    // Distance from x to the nearest known root (error metric for traces).
    double error_of(const Vec& x) const;
};

const std::vector<TestProblem>& builtin_catalog();

// Lookup by name; throws UnknownBuiltin.
const TestProblem& builtin_problem(const std::string& name);

} // namespace sgrf
