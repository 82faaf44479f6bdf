#pragma once

#include <map>
#include <memory>
#include <string>

namespace filippov {

/// Immutable arithmetic expression in x and y.
///
/// Grammar (precedence low to high):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | '+' unary | power
///   power  := atom ('^' unary)?          (right associative)
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
/// Names: x, y, pi, e, any bound constant; functions sin cos exp ln sqrt.
class Expr {
public:
    struct Node;

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    double eval(double x, double y) const;
    /// Symbolic partial derivative, var is 'x' or 'y'.
    Expr diff(char var) const;
    std::string str() const;
    bool valid() const { return static_cast<bool>(node_); }

    static Expr constant(double v);

private:
    std::shared_ptr<const Node> node_;
};

Expr parse_expression(const std::string& text, const std::map<std::string, double>& constants = {});

}  // namespace filippov
