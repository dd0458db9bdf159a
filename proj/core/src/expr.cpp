#include "slq/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "slq/errors.hpp"

namespace slq {

double Expr::eval(double x) const {
    switch (kind) {
        case Kind::Number: return number;
        case Kind::Var: return x;
        case Kind::Neg: return -lhs->eval(x);
        case Kind::Add: return lhs->eval(x) + rhs->eval(x);
        case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
        case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
        case Kind::Div: return lhs->eval(x) / rhs->eval(x);
        case Kind::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
        case Kind::Call:
            switch (func) {
                case Func::Sin: return std::sin(lhs->eval(x));
                case Func::Cos: return std::cos(lhs->eval(x));
                case Func::Exp: return std::exp(lhs->eval(x));
                case Func::Sqrt: return std::sqrt(lhs->eval(x));
                case Func::Log: return std::log(lhs->eval(x));
                case Func::Abs: return std::abs(lhs->eval(x));
            }
    }
    return 0.0; // unreachable
}

namespace {

ExprPtr make(Expr::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
}

ExprPtr make_num(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->number = v;
    return e;
}

struct Parser {
    std::string_view s;
    std::size_t pos = 0;

    [[noreturn]] void err(const std::string& msg, std::size_t at) {
        fail_pre("SyntaxError", msg + " at byte " + std::to_string(at));
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    ExprPtr parse() {
        skip_ws();
        if (pos >= s.size()) fail_pre("SyntaxError", "empty expression");
        ExprPtr e = expr();
        skip_ws();
        if (pos != s.size()) err("unexpected trailing input", pos);
        return e;
    }

    ExprPtr expr() {
        ExprPtr l = term();
        for (;;) {
            if (consume('+')) l = make(Expr::Kind::Add, l, term());
            else if (consume('-')) l = make(Expr::Kind::Sub, l, term());
            else return l;
        }
    }

    ExprPtr term() {
        ExprPtr l = factor();
        for (;;) {
            if (consume('*')) l = make(Expr::Kind::Mul, l, factor());
            else if (consume('/')) l = make(Expr::Kind::Div, l, factor());
            else return l;
        }
    }

    ExprPtr factor() {
        if (consume('-')) return make(Expr::Kind::Neg, factor());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (consume('^')) return make(Expr::Kind::Pow, base, factor());
        return base;
    }

    ExprPtr atom() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr e = expr();
            if (!consume(')')) err("expected ')'", pos);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        err("expected number, 'x', function or '('", pos);
    }

    ExprPtr number() {
        skip_ws();
        const char* begin = s.data() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) err("invalid number", pos);
        pos += static_cast<std::size_t>(end - begin);
        return make_num(v);
    }

    ExprPtr identifier() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        const std::string_view name = s.substr(start, pos - start);
        if (name == "x") return make(Expr::Kind::Var);

        Expr::Func f;
        if (name == "sin") f = Expr::Func::Sin;
        else if (name == "cos") f = Expr::Func::Cos;
        else if (name == "exp") f = Expr::Func::Exp;
        else if (name == "sqrt") f = Expr::Func::Sqrt;
        else if (name == "log") f = Expr::Func::Log;
        else if (name == "abs") f = Expr::Func::Abs;
        else
            fail_pre("UnknownIdentifier",
                     "'" + std::string(name) + "' at byte " + std::to_string(start));

        if (!consume('(')) err("expected '(' after function name", pos);
        ExprPtr arg = expr();
        if (!consume(')')) err("expected ')'", pos);
        auto e = make(Expr::Kind::Call, std::move(arg));
        const_cast<Expr&>(*e).func = f;
        return e;
    }
};

int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

const char* func_name(Expr::Func f) {
    switch (f) {
        case Expr::Func::Sin: return "sin";
        case Expr::Func::Cos: return "cos";
        case Expr::Func::Exp: return "exp";
        case Expr::Func::Sqrt: return "sqrt";
        case Expr::Func::Log: return "log";
        case Expr::Func::Abs: return "abs";
    }
    return "?";
}

void print(const Expr& e, std::string& out, int parent_prec) {
    const int prec = precedence(e.kind);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::Number: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.17g", e.number);
            out += buf;
            break;
        }
        case Expr::Kind::Var: out += 'x'; break;
        case Expr::Kind::Neg:
            out += '-';
            print(*e.lhs, out, prec + 1);
            break;
        case Expr::Kind::Add:
            print(*e.lhs, out, prec);
            out += " + ";
            print(*e.rhs, out, prec + 1);
            break;
        case Expr::Kind::Sub:
            print(*e.lhs, out, prec);
            out += " - ";
            print(*e.rhs, out, prec + 1);
            break;
        case Expr::Kind::Mul:
            print(*e.lhs, out, prec);
            out += " * ";
            print(*e.rhs, out, prec + 1);
            break;
        case Expr::Kind::Div:
            print(*e.lhs, out, prec);
            out += " / ";
            print(*e.rhs, out, prec + 1);
            break;
        case Expr::Kind::Pow:
            print(*e.lhs, out, prec + 1); // right assoc
            out += '^';
            print(*e.rhs, out, prec);
            break;
        case Expr::Kind::Call:
            out += func_name(e.func);
            out += '(';
            print(*e.lhs, out, 0);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

} // namespace

ExprPtr parse_expr(std::string_view text) {
    Parser p{text};
    return p.parse();
}

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out, 0);
    return out;
}

} // namespace slq
