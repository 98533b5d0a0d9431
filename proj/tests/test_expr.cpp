#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/expr.hpp"

using namespace sgrf;

namespace {

double eval1(const std::string& text, double x) {
    return to_field(parse(text, 1)).eval({x});
}

} // namespace

TEST_CASE("pinned parse/eval examples") {
    CHECK(eval1("abs(x1-0.6)", 0.6) == 0.0);
    CHECK(eval1("2^3^2", 0.0) == 512.0); // right-associative
    CHECK(to_field(parse("x1+x2", 2)).eval({1.0, 2.0}) == 3.0);
    CHECK(eval1("sqrt(abs(x1-0.6))", 0.6) == 0.0);
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse("x1*(", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse("1 + $", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse("", 1), SyntaxError);
    CHECK_THROWS_AS(parse("1 2", 1), SyntaxError);   // trailing input
    CHECK_THROWS_AS(parse("(1+2", 1), SyntaxError);  // unclosed paren
    CHECK_THROWS_AS(parse("sin", 1), SyntaxError);   // function without argument
    CHECK_THROWS_AS(parse("*3", 1), SyntaxError);
}

TEST_CASE("identifier resolution") {
    CHECK_THROWS_AS(parse("foo(x1)", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("x0", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("x1a", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("x3", 2), ArityExceeded);
    CHECK_THROWS_AS(parse("x10", 4), ArityExceeded);
    CHECK_NOTHROW(parse("x10", 10));
}

TEST_CASE("x/y/z aliases for low arity") {
    CHECK(to_field(parse("x", 1)).eval({3.5}) == 3.5);
    CHECK(to_field(parse("x+y", 2)).eval({1.0, 2.0}) == 3.0);
    CHECK(to_field(parse("x+y+z", 3)).eval({1.0, 2.0, 3.0}) == 6.0);
    CHECK_THROWS_AS(parse("y", 1), ArityExceeded);     // alias maps to x2
    CHECK_THROWS_AS(parse("y", 4), UnknownIdentifier); // aliases only for n <= 3
    // Alias and numbered forms refer to the same slot.
    CHECK(to_field(parse("y-x2", 2)).eval({5.0, 7.0}) == 0.0);
}

TEST_CASE("precedence and associativity") {
    CHECK(eval1("2+3*4", 0.0) == 14.0);
    CHECK(eval1("2*3+4", 0.0) == 10.0);
    CHECK(eval1("-2^2", 0.0) == -4.0);  // unary minus binds looser than ^
    CHECK(eval1("(-2)^2", 0.0) == 4.0);
    CHECK(eval1("2^-3", 0.0) == 0.125); // exponent may be signed
    CHECK(eval1("1-2-3", 0.0) == -4.0); // left associative
    CHECK(eval1("12/4/3", 0.0) == 1.0);
    CHECK(eval1("2*-3", 0.0) == -6.0);
    CHECK(eval1(" 1 +  2 * x1 ", 3.0) == 7.0); // whitespace-insensitive
}

TEST_CASE("eval-time non-finite values are errors") {
    CHECK_THROWS_AS(eval1("1/x1", 0.0), NonFiniteValue);
    CHECK_THROWS_AS(eval1("log(x1)", -1.0), NonFiniteValue);
    CHECK_THROWS_AS(eval1("sqrt(x1)", -1.0), NonFiniteValue);
    CHECK_THROWS_AS(eval1("(0-2)^0.5", 0.0), NonFiniteValue); // negative base, fractional power
    CHECK(eval1("(0-2)^2", 0.0) == 4.0);                      // integer power is fine
    CHECK(eval1("exp(x1)", 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
}

TEST_CASE("used-variable tracking") {
    const Expression e = parse("x1 + x3", 4);
    REQUIRE(e.used.size() == 4);
    CHECK(e.used[0]);
    CHECK_FALSE(e.used[1]);
    CHECK(e.used[2]);
    CHECK_FALSE(e.used[3]);
}

TEST_CASE("parse-print-parse idempotence on samples") {
    for (const char* text : {"abs(x1-0.6)", "2^3^2", "-x1*(3+x2)", "sin(cos(x1))+exp(x2/4)",
                             "sqrt(abs(x1))^2", "1-2-3-x1", "x1^-2", "0.1+0.2*0.3"}) {
        const Expression a = parse(text, 2);
        const Expression b = parse(print(a), 2);
        CHECK(structurally_equal(a.root, b.root));
        CHECK(print(a) == print(b));
    }
}

// Independent oracle: the test builds its own tree representation, prints it
// to text, and compares library evaluation of the parsed text against a
// direct recursive walk of the test's tree.
namespace {

struct Node {
    int kind;                      // 0 num, 1 var, 2 unary-, 3 binary, 4 call
    double value = 0.0;
    int var = 1;
    char op = '+';
    int func = 0;
    std::unique_ptr<Node> a, b;
};

const char* kFuncNames[] = {"sin", "cos", "exp", "abs"};

std::unique_ptr<Node> random_tree(std::mt19937_64& gen, int depth) {
    std::uniform_int_distribution<int> kind_pick(0, depth <= 0 ? 1 : 4);
    auto node = std::make_unique<Node>();
    node->kind = kind_pick(gen);
    switch (node->kind) {
        case 0: {
            std::uniform_real_distribution<double> num(-4.0, 4.0);
            node->value = num(gen);
            break;
        }
        case 1: {
            std::uniform_int_distribution<int> var(1, 3);
            node->var = var(gen);
            break;
        }
        case 2:
            node->a = random_tree(gen, depth - 1);
            break;
        case 3: {
            const char ops[] = {'+', '-', '*', '/'};
            node->op = ops[std::uniform_int_distribution<int>(0, 3)(gen)];
            node->a = random_tree(gen, depth - 1);
            node->b = random_tree(gen, depth - 1);
            break;
        }
        case 4:
            node->func = std::uniform_int_distribution<int>(0, 3)(gen);
            node->a = random_tree(gen, depth - 1);
            break;
    }
    return node;
}

std::string render(const Node& n) {
    switch (n.kind) {
        case 0: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.value);
            return n.value < 0 ? "(0" + std::string(buf) + ")" : buf;
        }
        case 1: return "x" + std::to_string(n.var);
        case 2: return "(-" + render(*n.a) + ")";
        case 3: return "(" + render(*n.a) + n.op + render(*n.b) + ")";
        case 4: return std::string(kFuncNames[n.func]) + "(" + render(*n.a) + ")";
    }
    return "";
}

double walk(const Node& n, const std::vector<double>& x) {
    switch (n.kind) {
        case 0: return n.value;
        case 1: return x[static_cast<std::size_t>(n.var - 1)];
        case 2: return -walk(*n.a, x);
        case 3: {
            const double a = walk(*n.a, x);
            const double b = walk(*n.b, x);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                default: return a / b;
            }
        }
        default: {
            const double a = walk(*n.a, x);
            switch (n.func) {
                case 0: return std::sin(a);
                case 1: return std::cos(a);
                case 2: return std::exp(a);
                default: return std::fabs(a);
            }
        }
    }
}

} // namespace

TEST_CASE("1000 random trees match the oracle to 1e-15 relative") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    int checked = 0;
    while (checked < 1000) {
        const auto tree = random_tree(gen, 6);
        const std::vector<double> x = {coord(gen), coord(gen), coord(gen)};
        const double expected = walk(*tree, x);
        if (!std::isfinite(expected) || std::fabs(expected) > 1e100) continue;
        const std::string text = render(*tree);
        const Expression e = parse(text, 3);
        const double got = e.root->eval(x);
        const double scale = std::max(1.0, std::fabs(expected));
        REQUIRE(std::fabs(got - expected) <= 1e-15 * scale);

        // Round-trip: printing and reparsing preserves structure and value.
        const Expression r = parse(print(e), 3);
        REQUIRE(structurally_equal(e.root, r.root));
        ++checked;
    }
}
