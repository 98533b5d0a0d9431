#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace sgrf {

ExprPtr Expr::number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Number;
    e->value_ = v;
    return e;
}

ExprPtr Expr::variable(std::size_t index) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Variable;
    e->var_index_ = index;
    return e;
}

ExprPtr Expr::unary_minus(ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Unary;
    e->op_ = '-';
    e->lhs_ = std::move(child);
    return e;
}

ExprPtr Expr::binary(char op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Binary;
    e->op_ = op;
    e->lhs_ = std::move(lhs);
    e->rhs_ = std::move(rhs);
    return e;
}

ExprPtr Expr::call(Func f, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind_ = Kind::Call;
    e->func_ = f;
    e->lhs_ = std::move(arg);
    return e;
}

double Expr::eval(const Vec& x) const {
    switch (kind_) {
        case Kind::Number: return value_;
        case Kind::Variable: return x[var_index_ - 1];
        case Kind::Unary: return -lhs_->eval(x);
        case Kind::Binary: {
            const double a = lhs_->eval(x);
            const double b = rhs_->eval(x);
            switch (op_) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0.0;
        }
        case Kind::Call: {
            const double a = lhs_->eval(x);
            switch (func_) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Log: return std::log(a);
                case Func::Sqrt: return std::sqrt(a);
                case Func::Abs: return std::fabs(a);
            }
            return 0.0;
        }
    }
    return 0.0;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

namespace {

struct Token {
    enum class Type { Number, Ident, Op, LParen, RParen, End };
    Type type = Type::End;
    double num = 0.0;
    std::string ident;
    char op = 0;
    std::size_t offset = 0;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.offset = i;
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            const char* begin = text.c_str() + i;
            char* end = nullptr;
            t.type = Token::Type::Number;
            t.num = std::strtod(begin, &end);
            i += static_cast<std::size_t>(end - begin);
            out.push_back(t);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            t.type = Token::Type::Ident;
            t.ident = text.substr(i, j - i);
            i = j;
            out.push_back(t);
            continue;
        }
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^':
                t.type = Token::Type::Op;
                t.op = c;
                break;
            case '(': t.type = Token::Type::LParen; break;
            case ')': t.type = Token::Type::RParen; break;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", i);
        }
        ++i;
        out.push_back(t);
    }
    Token end;
    end.type = Token::Type::End;
    end.offset = n;
    out.push_back(end);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::size_t arity)
        : tokens_(std::move(tokens)), arity_(arity), used_(arity, false) {}

    Expression run() {
        ExprPtr root = parse_sum();
        const Token& t = peek();
        if (t.type != Token::Type::End) throw SyntaxError("unexpected trailing input", t.offset);
        Expression e;
        e.root = std::move(root);
        e.arity = arity_;
        e.used = used_;
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    bool match_op(char op) {
        if (peek().type == Token::Type::Op && peek().op == op) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        ExprPtr lhs = parse_product();
        for (;;) {
            if (match_op('+'))
                lhs = Expr::binary('+', std::move(lhs), parse_product());
            else if (match_op('-'))
                lhs = Expr::binary('-', std::move(lhs), parse_product());
            else
                return lhs;
        }
    }

    ExprPtr parse_product() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (match_op('*'))
                lhs = Expr::binary('*', std::move(lhs), parse_unary());
            else if (match_op('/'))
                lhs = Expr::binary('/', std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    // Unary minus binds looser than ^: -2^2 is -(2^2).
    ExprPtr parse_unary() {
        if (match_op('-')) return Expr::unary_minus(parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (match_op('^')) return Expr::binary('^', std::move(base), parse_unary());
        return base;
    }

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Type::Number:
                ++pos_;
                return Expr::number(t.num);
            case Token::Type::LParen: {
                ++pos_;
                ExprPtr inner = parse_sum();
                if (peek().type != Token::Type::RParen)
                    throw SyntaxError("expected ')'", peek().offset);
                ++pos_;
                return inner;
            }
            case Token::Type::Ident: {
                ++pos_;
                return resolve_ident(t);
            }
            default:
                throw SyntaxError("expected a value", t.offset);
        }
    }

    ExprPtr resolve_ident(const Token& t) {
        static const std::pair<const char*, Func> functions[] = {
            {"sin", Func::Sin}, {"cos", Func::Cos},   {"exp", Func::Exp},
            {"log", Func::Log}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
        };
        for (const auto& [name, f] : functions) {
            if (t.ident == name) {
                if (peek().type != Token::Type::LParen)
                    throw SyntaxError("expected '(' after function name", peek().offset);
                ++pos_;
                ExprPtr arg = parse_sum();
                if (peek().type != Token::Type::RParen)
                    throw SyntaxError("expected ')'", peek().offset);
                ++pos_;
                return Expr::call(f, std::move(arg));
            }
        }
        return variable_for(t);
    }

    ExprPtr variable_for(const Token& t) {
        const std::string& s = t.ident;
        std::size_t index = 0;
        if (s.size() >= 2 && s[0] == 'x' && std::isdigit(static_cast<unsigned char>(s[1]))) {
            std::size_t idx = 0;
            for (std::size_t i = 1; i < s.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(s[i])))
                    throw UnknownIdentifier("unknown identifier '" + s + "'", t.offset);
                idx = idx * 10 + static_cast<std::size_t>(s[i] - '0');
                if (idx > 1000000) break;
            }
            if (idx == 0) throw UnknownIdentifier("variables are numbered from x1", t.offset);
            index = idx;
        } else if (s == "x" || s == "y" || s == "z") {
            if (arity_ > 3)
                throw UnknownIdentifier("alias '" + s + "' is only defined for arity <= 3",
                                        t.offset);
            index = static_cast<std::size_t>(s[0] - 'x') + 1;
        } else {
            throw UnknownIdentifier("unknown identifier '" + s + "'", t.offset);
        }
        if (index > arity_)
            throw ArityExceeded("variable '" + s + "' exceeds declared arity " +
                                    std::to_string(arity_),
                                t.offset);
        used_[index - 1] = true;
        return Expr::variable(index);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t arity_;
    std::vector<bool> used_;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Expression parse(const std::string& text, std::size_t arity) {
    if (arity == 0) throw InvalidArgument("expression arity must be >= 1");
    if (text.empty()) throw SyntaxError("empty expression", 0);
    return Parser(lex(text), arity).run();
}

std::string print(const ExprPtr& node) {
    switch (node->kind()) {
        case Expr::Kind::Number: return format_number(node->value());
        case Expr::Kind::Variable: return "x" + std::to_string(node->var_index());
        case Expr::Kind::Unary: return "(-" + print(node->lhs()) + ")";
        case Expr::Kind::Binary:
            return "(" + print(node->lhs()) + node->op() + print(node->rhs()) + ")";
        case Expr::Kind::Call:
            return std::string(func_name(node->func())) + "(" + print(node->lhs()) + ")";
    }
    return "";
}

std::string print(const Expression& e) { return print(e.root); }

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case Expr::Kind::Number:
            return a->value() == b->value() ||
                   (std::isnan(a->value()) && std::isnan(b->value()));
        case Expr::Kind::Variable: return a->var_index() == b->var_index();
        case Expr::Kind::Unary: return structurally_equal(a->lhs(), b->lhs());
        case Expr::Kind::Binary:
            return a->op() == b->op() && structurally_equal(a->lhs(), b->lhs()) &&
                   structurally_equal(a->rhs(), b->rhs());
        case Expr::Kind::Call:
            return a->func() == b->func() && structurally_equal(a->lhs(), b->lhs());
    }
    return false;
}

ScalarField to_field(const Expression& e) {
    ExprPtr root = e.root;
    return ScalarField(e.arity, [root](const Vec& x) { return root->eval(x); });
}

} // namespace sgrf
