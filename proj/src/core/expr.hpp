#pragma once

#include <memory>
#include <string>
#include <vector>

#include "field.hpp"

namespace sgrf {

// Immutable AST for user-supplied expressions. Variables are x1..xn with
// x, y, z accepted as aliases for x1..x3 when the declared arity is <= 3.
class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs };

class Expr {
public:
    enum class Kind { Number, Variable, Unary, Binary, Call };

    static ExprPtr number(double v);
    static ExprPtr variable(std::size_t index); // 1-based
    static ExprPtr unary_minus(ExprPtr child);
    static ExprPtr binary(char op, ExprPtr lhs, ExprPtr rhs); // + - * / ^
    static ExprPtr call(Func f, ExprPtr arg);

    Kind kind() const { return kind_; }
    double value() const { return value_; }
    std::size_t var_index() const { return var_index_; }
    char op() const { return op_; }
    Func func() const { return func_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }

    double eval(const Vec& x) const;

private:
    Kind kind_;
    double value_ = 0.0;
    std::size_t var_index_ = 0;
    char op_ = 0;
    Func func_ = Func::Sin;
    ExprPtr lhs_;
    ExprPtr rhs_;
};

struct Expression {
    ExprPtr root;
    std::size_t arity = 0;
    std::vector<bool> used; // used[i]: variable x(i+1) referenced
};

// Precedence: ^ (right-assoc) > unary minus > * / > + -. Whitespace ignored.
// Throws SyntaxError / UnknownIdentifier / ArityExceeded with byte offsets.
Expression parse(const std::string& text, std::size_t arity);

std::string print(const Expression& e);
std::string print(const ExprPtr& node);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

// ScalarField evaluating the expression; non-finite results surface as
// NonFiniteValue through ScalarField::eval.
ScalarField to_field(const Expression& e);

const char* func_name(Func f);

} // namespace sgrf
