#pragma once

// Closed-form scalar expressions over x1..xn and named constants.
//
// Expressions are immutable trees with shared subtrees. Every derivative used
// by the toolkit comes from Expression::differentiate, so margins computed
// downstream carry no truncation error. Construction goes through folding
// constructors: subtrees made only of literals collapse to a literal and the
// 0/1 identities of + - * / ^ are applied. Nothing else is simplified.

#include "wavecert/errors.hpp"

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavecert {

using ConstantTable = std::map<std::string, double, std::less<>>;

enum class Op {
    Number,
    Variable,
    Constant,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    PowInt, // base ^ integer literal
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    double value = 0.0;  // Number
    int index = 0;       // Variable, 0-based
    int exponent = 0;    // PowInt
    std::string name;    // Constant
    NodePtr lhs;         // unary operand / left operand / base
    NodePtr rhs;
};

class Expression {
public:
    /// The zero expression in dimension `dim`.
    explicit Expression(int dim = 1);
    Expression(NodePtr root, int dim);

    /// Parses `text`; variables x1..x`dim` are allowed.
    /// Throws ParseError (syntax, unknown function, variable index > dim).
    static Expression parse(std::string_view text, int dim);

    static Expression number(double v, int dim);
    static Expression variable(int axis, int dim); // 0-based axis
    static Expression constant(std::string name, int dim);

    int dim() const noexcept { return dim_; }
    const Node& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }

    /// Throws DomainError for log/sqrt of values <= 0, division by zero,
    /// non-finite intermediate results and unbound constants.
    double evaluate(std::span<const double> point, const ConstantTable& consts = {}) const;

    /// Exact partial derivative with respect to the 0-based `axis`.
    Expression differentiate(int axis) const;

    /// Replaces x_k by -x_k for every axis with flip[k] set.
    Expression reflect(const std::vector<bool>& flip) const;

    std::string render() const;
    bool structurally_equal(const Expression& other) const;

    bool is_number() const noexcept;
    bool is_zero() const noexcept;
    std::set<std::string> constants() const;

    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a);
    friend Expression pow(const Expression& base, int exponent);
    friend Expression exp(const Expression& a);
    friend Expression log(const Expression& a);
    friend Expression sin(const Expression& a);
    friend Expression cos(const Expression& a);
    friend Expression sqrt(const Expression& a);

private:
    NodePtr root_;
    int dim_;
};

} // namespace wavecert
