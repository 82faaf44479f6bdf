#include "filippov/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "filippov/errors.hpp"

namespace filippov {

enum class Op { Const, X, Y, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Ln, Sqrt };

struct Expr::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodeP = std::shared_ptr<const Expr::Node>;

NodeP mk(Op op, NodeP a = {}, NodeP b = {}) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodeP num(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

bool is_const(const NodeP& n, double v) { return n->op == Op::Const && n->value == v; }

// Light simplification so derivatives stay readable and cheap.
NodeP add(NodeP a, NodeP b) {
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return num(a->value + b->value);
    return mk(Op::Add, a, b);
}
NodeP sub(NodeP a, NodeP b) {
    if (is_const(b, 0)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return num(a->value - b->value);
    if (is_const(a, 0)) return mk(Op::Neg, b);
    return mk(Op::Sub, a, b);
}
NodeP mul(NodeP a, NodeP b) {
    if (is_const(a, 0) || is_const(b, 0)) return num(0);
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    if (a->op == Op::Const && b->op == Op::Const) return num(a->value * b->value);
    return mk(Op::Mul, a, b);
}
NodeP dv(NodeP a, NodeP b) {
    if (is_const(a, 0)) return num(0);
    if (is_const(b, 1)) return a;
    return mk(Op::Div, a, b);
}
NodeP neg(NodeP a) {
    if (a->op == Op::Const) return num(-a->value);
    return mk(Op::Neg, a);
}

double ev(const Expr::Node& n, double x, double y) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::X: return x;
        case Op::Y: return y;
        case Op::Add: return ev(*n.a, x, y) + ev(*n.b, x, y);
        case Op::Sub: return ev(*n.a, x, y) - ev(*n.b, x, y);
        case Op::Mul: return ev(*n.a, x, y) * ev(*n.b, x, y);
        case Op::Div: return ev(*n.a, x, y) / ev(*n.b, x, y);
        case Op::Pow: {
            double base = ev(*n.a, x, y);
            if (n.b->op == Op::Const) {
                double p = n.b->value;
                if (p == 2.0) return base * base;
                if (p == 3.0) return base * base * base;
            }
            return std::pow(base, ev(*n.b, x, y));
        }
        case Op::Neg: return -ev(*n.a, x, y);
        case Op::Sin: return std::sin(ev(*n.a, x, y));
        case Op::Cos: return std::cos(ev(*n.a, x, y));
        case Op::Exp: return std::exp(ev(*n.a, x, y));
        case Op::Ln: return std::log(ev(*n.a, x, y));
        case Op::Sqrt: return std::sqrt(ev(*n.a, x, y));
    }
    return NAN;
}

NodeP d(const NodeP& n, char var) {
    switch (n->op) {
        case Op::Const: return num(0);
        case Op::X: return num(var == 'x' ? 1 : 0);
        case Op::Y: return num(var == 'y' ? 1 : 0);
        case Op::Add: return add(d(n->a, var), d(n->b, var));
        case Op::Sub: return sub(d(n->a, var), d(n->b, var));
        case Op::Mul: return add(mul(d(n->a, var), n->b), mul(n->a, d(n->b, var)));
        case Op::Div:
            return dv(sub(mul(d(n->a, var), n->b), mul(n->a, d(n->b, var))), mk(Op::Pow, n->b, num(2)));
        case Op::Pow: {
            if (n->b->op == Op::Const) {
                double p = n->b->value;
                if (p == 0) return num(0);
                NodeP lower = p == 2 ? n->a : mk(Op::Pow, n->a, num(p - 1));
                return mul(mul(num(p), lower), d(n->a, var));
            }
            // u^v: u^v (v' ln u + v u'/u)
            NodeP t1 = mul(d(n->b, var), mk(Op::Ln, n->a));
            NodeP t2 = dv(mul(n->b, d(n->a, var)), n->a);
            return mul(n, add(t1, t2));
        }
        case Op::Neg: return neg(d(n->a, var));
        case Op::Sin: return mul(mk(Op::Cos, n->a), d(n->a, var));
        case Op::Cos: return neg(mul(mk(Op::Sin, n->a), d(n->a, var)));
        case Op::Exp: return mul(n, d(n->a, var));
        case Op::Ln: return dv(d(n->a, var), n->a);
        case Op::Sqrt: return dv(d(n->a, var), mul(num(2), n));
    }
    return num(NAN);
}

void print(std::ostream& os, const Expr::Node& n) {
    auto fn = [&](const char* name) {
        os << name << '(';
        print(os, *n.a);
        os << ')';
    };
    auto bin = [&](const char* s) {
        os << '(';
        print(os, *n.a);
        os << s;
        print(os, *n.b);
        os << ')';
    };
    switch (n.op) {
        case Op::Const: os << n.value; break;
        case Op::X: os << 'x'; break;
        case Op::Y: os << 'y'; break;
        case Op::Add: bin(" + "); break;
        case Op::Sub: bin(" - "); break;
        case Op::Mul: bin("*"); break;
        case Op::Div: bin("/"); break;
        case Op::Pow: bin("^"); break;
        case Op::Neg: os << "-("; print(os, *n.a); os << ')'; break;
        case Op::Sin: fn("sin"); break;
        case Op::Cos: fn("cos"); break;
        case Op::Exp: fn("exp"); break;
        case Op::Ln: fn("ln"); break;
        case Op::Sqrt: fn("sqrt"); break;
    }
}

class Parser {
public:
    Parser(const std::string& s, const std::map<std::string, double>& c) : s_(s), consts_(c) {}

    NodeP parse() {
        NodeP e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    const std::map<std::string, double>& consts_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "expression '" << s_ << "' at column " << pos_ + 1 << ": " << msg;
        throw ParseError(os.str());
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodeP expr() {
        NodeP l = term();
        for (;;) {
            if (eat('+')) l = mk(Op::Add, l, term());
            else if (eat('-')) l = mk(Op::Sub, l, term());
            else return l;
        }
    }
    NodeP term() {
        NodeP l = unary();
        for (;;) {
            if (eat('*')) l = mk(Op::Mul, l, unary());
            else if (eat('/')) l = mk(Op::Div, l, unary());
            else return l;
        }
    }
    NodeP unary() {
        if (eat('-')) return mk(Op::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }
    NodeP power() {
        NodeP base = atom();
        if (eat('^')) return mk(Op::Pow, base, unary());
        return base;
    }
    NodeP atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (eat('(')) {
            NodeP e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<size_t>(end - begin);
            return num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') {
                Op op;
                if (name == "sin") op = Op::Sin;
                else if (name == "cos") op = Op::Cos;
                else if (name == "exp") op = Op::Exp;
                else if (name == "ln") op = Op::Ln;
                else if (name == "sqrt") op = Op::Sqrt;
                else fail("unknown function '" + name + "'");
                eat('(');
                NodeP arg = expr();
                if (!eat(')')) fail("expected ')'");
                return mk(op, arg);
            }
            if (name == "x") return mk(Op::X);
            if (name == "y") return mk(Op::Y);
            auto it = consts_.find(name);
            if (it != consts_.end()) return num(it->second);
            if (name == "pi") return num(std::numbers::pi);
            if (name == "e") return num(std::numbers::e);
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

double Expr::eval(double x, double y) const { return ev(*node_, x, y); }

Expr Expr::diff(char var) const { return Expr(d(node_, var)); }

std::string Expr::str() const {
    std::ostringstream os;
    os.precision(17);
    print(os, *node_);
    return os.str();
}

Expr Expr::constant(double v) { return Expr(num(v)); }

Expr parse_expression(const std::string& text, const std::map<std::string, double>& constants) {
    Parser p(text, constants);
    return Expr(p.parse());
}

}  // namespace filippov
