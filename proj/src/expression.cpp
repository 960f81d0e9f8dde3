#include "beamlab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>

#include "beamlab/bump.hpp"

namespace beamlab {

namespace expr_detail {

enum class Kind : unsigned char { literal, var_t, var_x, add, sub, mul, div, pow, neg, fn_sin, fn_cos, fn_exp, fn_bump };

struct Node {
    Kind kind;
    double value = 0.0; // literal payload; pow exponent lives in rhs literal
    std::shared_ptr<const Node> lhs, rhs;
};

using P = std::shared_ptr<const Node>;

P literal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::literal;
    n->value = v;
    return n;
}

P leaf(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

P unary(Kind k, P a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    return n;
}

P binary(Kind k, P a, P b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

bool is_literal(const P& n, double v) { return n->kind == Kind::literal && n->value == v; }

// smart constructors with light folding, to keep derivative trees small
P make_add(P a, P b) {
    if (is_literal(a, 0.0)) return b;
    if (is_literal(b, 0.0)) return a;
    if (a->kind == Kind::literal && b->kind == Kind::literal) return literal(a->value + b->value);
    return binary(Kind::add, std::move(a), std::move(b));
}

P make_neg(P a) {
    if (a->kind == Kind::literal) return literal(-a->value);
    if (a->kind == Kind::neg) return a->lhs;
    return unary(Kind::neg, std::move(a));
}

P make_sub(P a, P b) {
    if (is_literal(b, 0.0)) return a;
    if (is_literal(a, 0.0)) return make_neg(std::move(b));
    if (a->kind == Kind::literal && b->kind == Kind::literal) return literal(a->value - b->value);
    return binary(Kind::sub, std::move(a), std::move(b));
}

P make_mul(P a, P b) {
    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return literal(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    if (a->kind == Kind::literal && b->kind == Kind::literal) return literal(a->value * b->value);
    return binary(Kind::mul, std::move(a), std::move(b));
}

P make_div(P a, P b) {
    if (is_literal(a, 0.0)) return literal(0.0);
    if (is_literal(b, 1.0)) return a;
    return binary(Kind::div, std::move(a), std::move(b));
}

P make_pow(P a, double c) {
    if (c == 0.0) return literal(1.0);
    if (c == 1.0) return a;
    if (a->kind == Kind::literal) return literal(std::pow(a->value, c));
    return binary(Kind::pow, std::move(a), literal(c));
}

double eval_node(const Node& n, double t, double x) {
    switch (n.kind) {
        case Kind::literal: return n.value;
        case Kind::var_t: return t;
        case Kind::var_x: return x;
        case Kind::add: return eval_node(*n.lhs, t, x) + eval_node(*n.rhs, t, x);
        case Kind::sub: return eval_node(*n.lhs, t, x) - eval_node(*n.rhs, t, x);
        case Kind::mul: {
            // 0 * anything = 0, so bump-derivative factors stay finite at the
            // support edge where the rational part blows up
            const double a = eval_node(*n.lhs, t, x);
            if (a == 0.0) return 0.0;
            const double b = eval_node(*n.rhs, t, x);
            if (b == 0.0) return 0.0;
            return a * b;
        }
        case Kind::div: {
            const double a = eval_node(*n.lhs, t, x);
            if (a == 0.0) return 0.0;
            return a / eval_node(*n.rhs, t, x);
        }
        case Kind::pow: return std::pow(eval_node(*n.lhs, t, x), n.rhs->value);
        case Kind::neg: return -eval_node(*n.lhs, t, x);
        case Kind::fn_sin: return std::sin(eval_node(*n.lhs, t, x));
        case Kind::fn_cos: return std::cos(eval_node(*n.lhs, t, x));
        case Kind::fn_exp: return std::exp(eval_node(*n.lhs, t, x));
        case Kind::fn_bump: return bump(eval_node(*n.lhs, t, x));
    }
    return 0.0;
}

P diff_node(const P& n, Kind var) {
    switch (n->kind) {
        case Kind::literal: return literal(0.0);
        case Kind::var_t: return literal(var == Kind::var_t ? 1.0 : 0.0);
        case Kind::var_x: return literal(var == Kind::var_x ? 1.0 : 0.0);
        case Kind::add: return make_add(diff_node(n->lhs, var), diff_node(n->rhs, var));
        case Kind::sub: return make_sub(diff_node(n->lhs, var), diff_node(n->rhs, var));
        case Kind::mul:
            return make_add(make_mul(diff_node(n->lhs, var), n->rhs), make_mul(n->lhs, diff_node(n->rhs, var)));
        case Kind::div:
            return make_div(make_sub(make_mul(diff_node(n->lhs, var), n->rhs), make_mul(n->lhs, diff_node(n->rhs, var))),
                            make_pow(n->rhs, 2.0));
        case Kind::pow: {
            const double c = n->rhs->value;
            return make_mul(make_mul(literal(c), make_pow(n->lhs, c - 1.0)), diff_node(n->lhs, var));
        }
        case Kind::neg: return make_neg(diff_node(n->lhs, var));
        case Kind::fn_sin: return make_mul(unary(Kind::fn_cos, n->lhs), diff_node(n->lhs, var));
        case Kind::fn_cos: return make_neg(make_mul(unary(Kind::fn_sin, n->lhs), diff_node(n->lhs, var)));
        case Kind::fn_exp: return make_mul(unary(Kind::fn_exp, n->lhs), diff_node(n->lhs, var));
        case Kind::fn_bump: {
            // bump'(y) = bump(y) * (-2y) / (1 - y^2)^2
            const P y = n->lhs;
            const P rational = make_div(make_mul(literal(-2.0), y),
                                        make_pow(make_sub(literal(1.0), make_pow(y, 2.0)), 2.0));
            return make_mul(make_mul(unary(Kind::fn_bump, y), rational), diff_node(y, var));
        }
    }
    return literal(0.0);
}

bool depends_node(const Node& n, Kind var) {
    if (n.kind == var) return true;
    if (n.lhs && depends_node(*n.lhs, var)) return true;
    if (n.rhs && depends_node(*n.rhs, var)) return true;
    return false;
}

bool identical_node(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::literal) return a.value == b.value;
    if ((a.lhs == nullptr) != (b.lhs == nullptr) || (a.rhs == nullptr) != (b.rhs == nullptr)) return false;
    if (a.lhs && !identical_node(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !identical_node(*a.rhs, *b.rhs)) return false;
    return true;
}

std::string print_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_node(const Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::literal:
            if (n.value < 0.0 || std::signbit(n.value)) {
                out += '(';
                out += print_double(n.value);
                out += ')';
            } else {
                out += print_double(n.value);
            }
            return;
        case Kind::var_t: out += 't'; return;
        case Kind::var_x: out += 'x'; return;
        case Kind::neg:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case Kind::fn_sin: out += "sin("; break;
        case Kind::fn_cos: out += "cos("; break;
        case Kind::fn_exp: out += "exp("; break;
        case Kind::fn_bump: out += "bump("; break;
        default: {
            const char* op = n.kind == Kind::add   ? "+"
                             : n.kind == Kind::sub ? "-"
                             : n.kind == Kind::mul ? "*"
                             : n.kind == Kind::div ? "/"
                                                   : "^";
            out += '(';
            print_node(*n.lhs, out);
            out += op;
            print_node(*n.rhs, out);
            out += ')';
            return;
        }
    }
    print_node(*n.lhs, out);
    out += ')';
}

/// Recursive-descent parser. Binary + - * / are left-associative, ^ is
/// right-associative and its exponent must be variable-free.
class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    P parse() {
        P e = expr();
        skip_ws();
        if (pos_ < src_.size()) fail("unexpected trailing input", static_cast<int>(pos_));
        return e;
    }

private:
    const std::string& src_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, int at) const {
        throw ParseError(msg + " at position " + std::to_string(at), at);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    P expr() {
        P e = term();
        for (;;) {
            if (eat('+'))
                e = binary(Kind::add, e, term());
            else if (eat('-'))
                e = binary(Kind::sub, e, term());
            else
                return e;
        }
    }

    P term() {
        P e = unary_expr();
        for (;;) {
            if (eat('*'))
                e = binary(Kind::mul, e, unary_expr());
            else if (eat('/'))
                e = binary(Kind::div, e, unary_expr());
            else
                return e;
        }
    }

    P unary_expr() {
        if (eat('-')) {
            P e = unary_expr();
            // fold so "-3" and a printed negative literal parse identically
            if (e->kind == Kind::literal) return literal(-e->value);
            return unary(Kind::neg, e);
        }
        return power();
    }

    P power() {
        P base = primary();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '^') {
            const int at = static_cast<int>(pos_);
            ++pos_;
            P e = unary_expr(); // right-associative; allows 2^-3 and 2^3^2
            if (depends_node(*e, Kind::var_t) || depends_node(*e, Kind::var_x))
                fail("exponent must be constant (no t or x)", at);
            return binary(Kind::pow, base, literal(eval_node(*e, 0.0, 0.0)));
        }
        return base;
    }

    P primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input", static_cast<int>(pos_));
        const char c = src_[pos_];
        if (c == '(') {
            const int at = static_cast<int>(pos_);
            ++pos_;
            P e = expr();
            if (!eat(')')) fail("unbalanced parenthesis opened", at);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'", static_cast<int>(pos_));
    }

    P number() {
        const char* begin = src_.data() + pos_;
        const char* end = src_.data() + src_.size();
        double v = 0.0;
        const auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr == begin) fail("malformed number", static_cast<int>(pos_));
        pos_ += static_cast<size_t>(res.ptr - begin);
        return literal(v);
    }

    P identifier() {
        const size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "t") return leaf(Kind::var_t);
        if (name == "x") return leaf(Kind::var_x);
        if (name == "pi") return literal(M_PI);

        Kind fn;
        if (name == "sin")
            fn = Kind::fn_sin;
        else if (name == "cos")
            fn = Kind::fn_cos;
        else if (name == "exp")
            fn = Kind::fn_exp;
        else if (name == "bump")
            fn = Kind::fn_bump;
        else
            fail("unknown identifier '" + name + "'", static_cast<int>(start));

        if (!eat('(')) fail("function '" + name + "' expects an argument list", static_cast<int>(pos_));
        P arg = expr();
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ',')
            fail("function '" + name + "' takes exactly one argument", static_cast<int>(pos_));
        if (!eat(')')) fail("unbalanced parenthesis in call of '" + name + "'", static_cast<int>(pos_));
        return unary(fn, arg);
    }
};

} // namespace expr_detail

using namespace expr_detail;

Expression::Expression() : root_(literal(0.0)) {}
Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

Expression Expression::parse(const std::string& source) { return Expression(Parser(source).parse()); }

double Expression::eval(double t, double x) const { return eval_node(*root_, t, x); }

Expression Expression::differentiate(char var, int order) const {
    BEAMLAB_REQUIRE(var == 't' || var == 'x', "differentiate: variable must be 't' or 'x'");
    BEAMLAB_REQUIRE(order >= 1 && order <= 2, "differentiate: order must be 1 or 2, got " << order);
    const Kind k = var == 't' ? Kind::var_t : Kind::var_x;
    P d = diff_node(root_, k);
    if (order == 2) d = diff_node(d, k);
    return Expression(std::move(d));
}

std::string Expression::print() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool Expression::identical(const Expression& other) const { return identical_node(*root_, *other.root_); }

bool Expression::depends_on(char var) const {
    return depends_node(*root_, var == 't' ? Kind::var_t : Kind::var_x);
}

} // namespace beamlab
