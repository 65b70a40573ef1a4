#include "skl/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace skl {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, exp, log, sqrt, abs, min, max };

struct Expr::Node {
    Op op;
    double value = 0.0;   // constant
    std::size_t slot = 0;  // variable
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
    const std::string& s;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression error at offset " + std::to_string(pos) + ": " +
                                    msg + " in \"" + s + "\"");
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Expr::Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+'))
                lhs = make(Op::add, lhs, parse_term());
            else if (consume('-'))
                lhs = make(Op::sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (consume('*'))
                lhs = make(Op::mul, lhs, parse_factor());
            else if (consume('/'))
                lhs = make(Op::div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    NodePtr parse_factor() {
        if (consume('-')) return make(Op::neg, parse_factor());
        NodePtr base = parse_primary();
        if (consume('^')) return make(Op::pow, base, parse_factor());  // right assoc
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (c == '(') {
            ++pos;
            NodePtr e = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* start = s.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) fail("bad numeric literal");
        pos += static_cast<std::size_t>(end - start);
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::constant;
        n->value = v;
        return n;
    }

    NodePtr parse_ident() {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        const std::string name = s.substr(start, pos - start);
        if (peek() == '(') return parse_call(name);
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (vars[i] == name) {
                auto n = std::make_shared<Expr::Node>();
                n->op = Op::variable;
                n->slot = i;
                return n;
            }
        }
        if (name == "pi") {
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::constant;
            n->value = 3.14159265358979323846;
            return n;
        }
        if (name == "e") {
            auto n = std::make_shared<Expr::Node>();
            n->op = Op::constant;
            n->value = 2.71828182845904523536;
            return n;
        }
        fail("unknown identifier '" + name + "'");
    }

    NodePtr parse_call(const std::string& name) {
        if (!consume('(')) fail("expected '('");
        std::vector<NodePtr> args;
        if (peek() != ')') {
            args.push_back(parse_expr());
            while (consume(',')) args.push_back(parse_expr());
        }
        if (!consume(')')) fail("expected ')' after arguments");
        auto unary = [&](Op op) {
            if (args.size() != 1) fail(name + " takes 1 argument");
            return make(op, args[0]);
        };
        auto binary = [&](Op op) {
            if (args.size() != 2) fail(name + " takes 2 arguments");
            return make(op, args[0], args[1]);
        };
        if (name == "exp") return unary(Op::exp);
        if (name == "log") return unary(Op::log);
        if (name == "sqrt") return unary(Op::sqrt);
        if (name == "abs") return unary(Op::abs);
        if (name == "pow") return binary(Op::pow);
        if (name == "min") return binary(Op::min);
        if (name == "max") return binary(Op::max);
        fail("unknown function '" + name + "'");
    }
};

double eval_node(const Expr::Node& n, std::span<const double> v) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::variable: return v[n.slot];
        case Op::add: return eval_node(*n.a, v) + eval_node(*n.b, v);
        case Op::sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
        case Op::mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
        case Op::div: return eval_node(*n.a, v) / eval_node(*n.b, v);
        case Op::pow: return std::pow(eval_node(*n.a, v), eval_node(*n.b, v));
        case Op::neg: return -eval_node(*n.a, v);
        case Op::exp: return std::exp(eval_node(*n.a, v));
        case Op::log: return std::log(eval_node(*n.a, v));
        case Op::sqrt: return std::sqrt(eval_node(*n.a, v));
        case Op::abs: return std::fabs(eval_node(*n.a, v));
        case Op::min: return std::fmin(eval_node(*n.a, v), eval_node(*n.b, v));
        case Op::max: return std::fmax(eval_node(*n.a, v), eval_node(*n.b, v));
    }
    return 0.0;
}

}  // namespace

Expr::Expr() = default;
Expr::~Expr() = default;
Expr::Expr(Expr&&) noexcept = default;
Expr& Expr::operator=(Expr&&) noexcept = default;
Expr::Expr(const Expr&) = default;
Expr& Expr::operator=(const Expr&) = default;

Expr Expr::compile(const std::string& text, const std::vector<std::string>& variables) {
    Parser p{text, variables};
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    Expr e;
    e.text_ = text;
    e.root_ = std::move(root);
    return e;
}

double Expr::eval(std::span<const double> values) const {
    if (!root_) throw std::logic_error("Expr: empty");
    return eval_node(*root_, values);
}

}  // namespace skl
