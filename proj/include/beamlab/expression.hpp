#ifndef BEAMLAB_EXPRESSION_HPP
#define BEAMLAB_EXPRESSION_HPP

#include <memory>
#include <string>

#include "beamlab/errors.hpp"

namespace beamlab {

/// Syntax error with the offending position in the source string.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int position) : Error(what), position_(position) {}
    int position() const { return position_; }

private:
    int position_ = 0;
};

namespace expr_detail {
struct Node;
}

/// Scenario function over the variables t and x: literals, pi, + - * / ^
/// (constant exponent), unary minus, sin, cos, exp and the compactly
/// supported bump(y) = exp(-1/(1-y^2)) for |y| < 1.
///
/// The grammar is closed under differentiation: bump' is expressed as bump
/// times a rational factor, and products evaluate 0 * anything = 0 so those
/// factors stay harmless at the support edge.
class Expression {
public:
    Expression(); // the zero expression

    static Expression parse(const std::string& source);

    double eval(double t, double x) const;

    /// Symbolic derivative of the given order with respect to 't' or 'x'.
    Expression differentiate(char var, int order) const;

    /// Canonical fully parenthesized form; parsing it back yields an
    /// identical tree.
    std::string print() const;

    bool identical(const Expression& other) const;
    bool depends_on(char var) const;

private:
    explicit Expression(std::shared_ptr<const expr_detail::Node> root);
    std::shared_ptr<const expr_detail::Node> root_;
};

} // namespace beamlab

#endif
