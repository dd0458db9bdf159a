#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace slq {

// Closed-form coefficient expressions over the single variable `x`.
//
// Grammar (left-assoc + - * /, right-assoc ^, unary minus below ^):
//   expr   := term  (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | sqrt | log | abs
class Expr {
public:
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Exp, Sqrt, Log, Abs };

    Kind kind;
    double number = 0.0;            // Kind::Number
    Func func = Func::Sin;          // Kind::Call
    std::shared_ptr<const Expr> lhs, rhs;

    double eval(double x) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Throws Error("SyntaxError", ...) with a byte offset, or
// Error("UnknownIdentifier", ...) for identifiers outside the grammar.
ExprPtr parse_expr(std::string_view text);

// Canonical form; parse(print(e)) evaluates identically.
std::string to_string(const Expr& e);

} // namespace slq
