#include "wavecert/expr.hpp"

#include <charconv>
#include <cmath>
#include <cctype>
#include <utility>

namespace wavecert {

namespace {

NodePtr make_number(double v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Number;
    n->value = v;
    return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool is_num(const NodePtr& n) { return n->op == Op::Number; }
bool is_num(const NodePtr& n, double v) { return n->op == Op::Number && n->value == v; }

// Folding constructors. A literal result is only produced when it is finite
// and the operation is defined; otherwise the node is kept so evaluation
// reports the domain error.

NodePtr fold_or(double v, NodePtr fallback)
{
    return std::isfinite(v) ? make_number(v) : std::move(fallback);
}

NodePtr neg(const NodePtr& a)
{
    if (is_num(a))
        return make_number(-a->value);
    if (a->op == Op::Neg)
        return a->lhs;
    return make_node(Op::Neg, a);
}

NodePtr add(const NodePtr& a, const NodePtr& b)
{
    if (is_num(a) && is_num(b))
        return fold_or(a->value + b->value, make_node(Op::Add, a, b));
    if (is_num(a, 0.0))
        return b;
    if (is_num(b, 0.0))
        return a;
    return make_node(Op::Add, a, b);
}

NodePtr sub(const NodePtr& a, const NodePtr& b)
{
    if (is_num(a) && is_num(b))
        return fold_or(a->value - b->value, make_node(Op::Sub, a, b));
    if (is_num(b, 0.0))
        return a;
    if (is_num(a, 0.0))
        return neg(b);
    return make_node(Op::Sub, a, b);
}

NodePtr mul(const NodePtr& a, const NodePtr& b)
{
    if (is_num(a) && is_num(b))
        return fold_or(a->value * b->value, make_node(Op::Mul, a, b));
    if (is_num(a, 0.0) || is_num(b, 0.0))
        return make_number(0.0);
    if (is_num(a, 1.0))
        return b;
    if (is_num(b, 1.0))
        return a;
    if (is_num(a, -1.0))
        return neg(b);
    if (is_num(b, -1.0))
        return neg(a);
    return make_node(Op::Mul, a, b);
}

NodePtr div(const NodePtr& a, const NodePtr& b)
{
    if (is_num(a) && is_num(b) && b->value != 0.0)
        return fold_or(a->value / b->value, make_node(Op::Div, a, b));
    if (is_num(a, 0.0) && !is_num(b, 0.0))
        return make_number(0.0);
    if (is_num(b, 1.0))
        return a;
    return make_node(Op::Div, a, b);
}

NodePtr powi(const NodePtr& base, int exponent)
{
    if (exponent == 0)
        return make_number(1.0);
    if (exponent == 1)
        return base;
    if (is_num(base) && !(base->value == 0.0 && exponent < 0)) {
        double v = std::pow(base->value, exponent);
        if (std::isfinite(v))
            return make_number(v);
    }
    auto n = std::make_shared<Node>();
    n->op = Op::PowInt;
    n->lhs = base;
    n->exponent = exponent;
    return n;
}

double apply_function(Op op, double v)
{
    switch (op) {
    case Op::Exp:
        return std::exp(v);
    case Op::Log:
        return std::log(v);
    case Op::Sin:
        return std::sin(v);
    case Op::Cos:
        return std::cos(v);
    case Op::Sqrt:
        return std::sqrt(v);
    default:
        return std::nan("");
    }
}

NodePtr func(Op op, const NodePtr& a)
{
    if (is_num(a)) {
        double v = a->value;
        bool defined = !((op == Op::Log || op == Op::Sqrt) && v <= 0.0);
        if (defined) {
            double r = apply_function(op, v);
            if (std::isfinite(r))
                return make_number(r);
        }
    }
    return make_node(op, a);
}

// ---------------------------------------------------------------- parser

bool is_function_name(std::string_view s, Op& op)
{
    if (s == "exp")
        op = Op::Exp;
    else if (s == "log")
        op = Op::Log;
    else if (s == "sin")
        op = Op::Sin;
    else if (s == "cos")
        op = Op::Cos;
    else if (s == "sqrt")
        op = Op::Sqrt;
    else
        return false;
    return true;
}

class Parser {
public:
    Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    NodePtr parse()
    {
        NodePtr e = expr();
        skip();
        if (pos_ != text_.size())
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;

    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = add(lhs, term());
            else if (accept('-'))
                lhs = sub(lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*'))
                lhs = mul(lhs, factor());
            else if (accept('/'))
                lhs = div(lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor()
    {
        NodePtr base = unary();
        if (!accept('^'))
            return base;
        NodePtr e = unary();
        if (is_num(e) && e->value == std::trunc(e->value) && std::abs(e->value) <= 1 << 20)
            return powi(base, static_cast<int>(e->value));
        // Non-integer exponents: b^e = exp(e*log(b)).
        return func(Op::Exp, mul(e, func(Op::Log, base)));
    }

    NodePtr unary()
    {
        if (accept('-'))
            return neg(unary());
        return atom();
    }

    NodePtr atom()
    {
        skip();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    NodePtr number()
    {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            return pos_ > s;
        };
        if (!digits())
            throw ParseError("malformed number", start);
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            if (!digits())
                throw ParseError("malformed exponent", mark);
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(v))
            throw ParseError("malformed number", start);
        return make_number(v);
    }

    NodePtr identifier()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view id = text_.substr(start, pos_ - start);

        std::size_t after = pos_;
        skip();
        bool call = pos_ < text_.size() && text_[pos_] == '(';
        pos_ = after;
        if (call) {
            Op op;
            if (!is_function_name(id, op))
                throw ParseError("unknown function '" + std::string(id) + "'", start);
            accept('(');
            NodePtr arg = expr();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return func(op, arg);
        }

        if (id.size() > 1 && id[0] == 'x' &&
            id.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            long k = 0;
            auto [p, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
            if (ec != std::errc() || k < 1 || k > dim_)
                throw ParseError("variable '" + std::string(id) + "' out of range for dimension " +
                                     std::to_string(dim_),
                                 start);
            auto n = std::make_shared<Node>();
            n->op = Op::Variable;
            n->index = static_cast<int>(k - 1);
            return n;
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Constant;
        n->name = std::string(id);
        return n;
    }
};

// ------------------------------------------------------------ evaluation

double eval(const Node& n, std::span<const double> x, const ConstantTable& consts)
{
    double r = 0.0;
    switch (n.op) {
    case Op::Number:
        return n.value;
    case Op::Variable:
        return x[static_cast<std::size_t>(n.index)];
    case Op::Constant: {
        auto it = consts.find(n.name);
        if (it == consts.end())
            throw DomainError("unbound constant '" + n.name + "'");
        return it->second;
    }
    case Op::Neg:
        return -eval(*n.lhs, x, consts);
    case Op::Add:
        r = eval(*n.lhs, x, consts) + eval(*n.rhs, x, consts);
        break;
    case Op::Sub:
        r = eval(*n.lhs, x, consts) - eval(*n.rhs, x, consts);
        break;
    case Op::Mul:
        r = eval(*n.lhs, x, consts) * eval(*n.rhs, x, consts);
        break;
    case Op::Div: {
        double num = eval(*n.lhs, x, consts);
        double den = eval(*n.rhs, x, consts);
        if (den == 0.0)
            throw DomainError("division by zero");
        r = num / den;
        break;
    }
    case Op::PowInt: {
        double b = eval(*n.lhs, x, consts);
        if (b == 0.0 && n.exponent < 0)
            throw DomainError("division by zero");
        r = std::pow(b, n.exponent);
        break;
    }
    case Op::Log:
    case Op::Sqrt: {
        double v = eval(*n.lhs, x, consts);
        if (!(v > 0.0))
            throw DomainError(n.op == Op::Log ? "log of non-positive value" : "sqrt of non-positive value");
        r = apply_function(n.op, v);
        break;
    }
    case Op::Exp:
    case Op::Sin:
    case Op::Cos:
        r = apply_function(n.op, eval(*n.lhs, x, consts));
        break;
    }
    if (!std::isfinite(r))
        throw DomainError("non-finite value");
    return r;
}

// -------------------------------------------------------- differentiation

NodePtr diff(const NodePtr& n, int axis)
{
    switch (n->op) {
    case Op::Number:
    case Op::Constant:
        return make_number(0.0);
    case Op::Variable:
        return make_number(n->index == axis ? 1.0 : 0.0);
    case Op::Neg:
        return neg(diff(n->lhs, axis));
    case Op::Add:
        return add(diff(n->lhs, axis), diff(n->rhs, axis));
    case Op::Sub:
        return sub(diff(n->lhs, axis), diff(n->rhs, axis));
    case Op::Mul:
        return add(mul(diff(n->lhs, axis), n->rhs), mul(n->lhs, diff(n->rhs, axis)));
    case Op::Div: {
        NodePtr da = diff(n->lhs, axis);
        NodePtr db = diff(n->rhs, axis);
        if (is_num(db, 0.0))
            return div(da, n->rhs);
        return div(sub(mul(da, n->rhs), mul(n->lhs, db)), powi(n->rhs, 2));
    }
    case Op::PowInt:
        return mul(mul(make_number(n->exponent), powi(n->lhs, n->exponent - 1)), diff(n->lhs, axis));
    case Op::Exp:
        return mul(diff(n->lhs, axis), n);
    case Op::Log:
        return div(diff(n->lhs, axis), n->lhs);
    case Op::Sin:
        return mul(diff(n->lhs, axis), func(Op::Cos, n->lhs));
    case Op::Cos:
        return neg(mul(diff(n->lhs, axis), func(Op::Sin, n->lhs)));
    case Op::Sqrt:
        return div(diff(n->lhs, axis), mul(make_number(2.0), n));
    }
    return make_number(0.0);
}

NodePtr rebuild_reflected(const NodePtr& n, const std::vector<bool>& flip)
{
    switch (n->op) {
    case Op::Number:
    case Op::Constant:
        return n;
    case Op::Variable:
        if (static_cast<std::size_t>(n->index) < flip.size() && flip[static_cast<std::size_t>(n->index)])
            return make_node(Op::Neg, n);
        return n;
    case Op::Neg:
        return neg(rebuild_reflected(n->lhs, flip));
    case Op::Add:
        return add(rebuild_reflected(n->lhs, flip), rebuild_reflected(n->rhs, flip));
    case Op::Sub:
        return sub(rebuild_reflected(n->lhs, flip), rebuild_reflected(n->rhs, flip));
    case Op::Mul:
        return mul(rebuild_reflected(n->lhs, flip), rebuild_reflected(n->rhs, flip));
    case Op::Div:
        return div(rebuild_reflected(n->lhs, flip), rebuild_reflected(n->rhs, flip));
    case Op::PowInt:
        return powi(rebuild_reflected(n->lhs, flip), n->exponent);
    default:
        return func(n->op, rebuild_reflected(n->lhs, flip));
    }
}

// -------------------------------------------------------------- rendering

int precedence(const Node& n)
{
    switch (n.op) {
    case Op::Add:
    case Op::Sub:
        return 1;
    case Op::Mul:
    case Op::Div:
        return 2;
    case Op::PowInt:
        return 3;
    case Op::Neg:
        return 4;
    default:
        return 5;
    }
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (v < 0.0 || (v == 0.0 && std::signbit(v)))
        return "(" + s + ")";
    return s;
}

std::string render(const Node& n);

std::string wrap(const Node& n, bool paren)
{
    return paren ? "(" + render(n) + ")" : render(n);
}

const char* function_name(Op op)
{
    switch (op) {
    case Op::Exp:
        return "exp";
    case Op::Log:
        return "log";
    case Op::Sin:
        return "sin";
    case Op::Cos:
        return "cos";
    case Op::Sqrt:
        return "sqrt";
    default:
        return "?";
    }
}

std::string render(const Node& n)
{
    switch (n.op) {
    case Op::Number:
        return format_number(n.value);
    case Op::Variable:
        return "x" + std::to_string(n.index + 1);
    case Op::Constant:
        return n.name;
    case Op::Neg:
        return "-" + wrap(*n.lhs, precedence(*n.lhs) < 4);
    case Op::Add:
    case Op::Sub:
        return wrap(*n.lhs, false) + (n.op == Op::Add ? " + " : " - ") + wrap(*n.rhs, precedence(*n.rhs) <= 1);
    case Op::Mul:
    case Op::Div:
        return wrap(*n.lhs, precedence(*n.lhs) < 2) + (n.op == Op::Mul ? "*" : "/") +
               wrap(*n.rhs, precedence(*n.rhs) <= 2);
    case Op::PowInt:
        return wrap(*n.lhs, precedence(*n.lhs) < 5 || (n.lhs->op == Op::Number && n.lhs->value < 0)) + "^" +
               (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
    default:
        return std::string(function_name(n.op)) + "(" + render(*n.lhs) + ")";
    }
}

bool equal(const Node& a, const Node& b)
{
    if (&a == &b)
        return true;
    if (a.op != b.op)
        return false;
    switch (a.op) {
    case Op::Number:
        return a.value == b.value;
    case Op::Variable:
        return a.index == b.index;
    case Op::Constant:
        return a.name == b.name;
    case Op::PowInt:
        return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
        return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    default:
        return equal(*a.lhs, *b.lhs);
    }
}

void collect_constants(const Node& n, std::set<std::string>& out)
{
    if (n.op == Op::Constant)
        out.insert(n.name);
    if (n.lhs)
        collect_constants(*n.lhs, out);
    if (n.rhs)
        collect_constants(*n.rhs, out);
}

} // namespace

Expression::Expression(int dim) : root_(make_number(0.0)), dim_(dim) {}

Expression::Expression(NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {}

Expression Expression::parse(std::string_view text, int dim)
{
    if (dim < 1)
        throw ParseError("dimension must be positive", 0);
    return Expression(Parser(text, dim).parse(), dim);
}

Expression Expression::number(double v, int dim) { return Expression(make_number(v), dim); }

Expression Expression::variable(int axis, int dim)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    n->index = axis;
    return Expression(n, dim);
}

Expression Expression::constant(std::string name, int dim)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Constant;
    n->name = std::move(name);
    return Expression(n, dim);
}

double Expression::evaluate(std::span<const double> point, const ConstantTable& consts) const
{
    if (point.size() != static_cast<std::size_t>(dim_))
        throw DomainError("point has dimension " + std::to_string(point.size()) + ", expected " +
                          std::to_string(dim_));
    return eval(*root_, point, consts);
}

Expression Expression::differentiate(int axis) const { return Expression(diff(root_, axis), dim_); }

Expression Expression::reflect(const std::vector<bool>& flip) const
{
    return Expression(rebuild_reflected(root_, flip), dim_);
}

std::string Expression::render() const { return wavecert::render(*root_); }

bool Expression::structurally_equal(const Expression& other) const
{
    return dim_ == other.dim_ && equal(*root_, *other.root_);
}

bool Expression::is_number() const noexcept { return root_->op == Op::Number; }

bool Expression::is_zero() const noexcept { return is_num(root_, 0.0); }

std::set<std::string> Expression::constants() const
{
    std::set<std::string> out;
    collect_constants(*root_, out);
    return out;
}

Expression operator+(const Expression& a, const Expression& b) { return {add(a.root_, b.root_), a.dim_}; }
Expression operator-(const Expression& a, const Expression& b) { return {sub(a.root_, b.root_), a.dim_}; }
Expression operator*(const Expression& a, const Expression& b) { return {mul(a.root_, b.root_), a.dim_}; }
Expression operator/(const Expression& a, const Expression& b) { return {div(a.root_, b.root_), a.dim_}; }
Expression operator-(const Expression& a) { return {neg(a.root_), a.dim_}; }
Expression pow(const Expression& base, int exponent) { return {powi(base.root_, exponent), base.dim_}; }
Expression exp(const Expression& a) { return {func(Op::Exp, a.root_), a.dim_}; }
Expression log(const Expression& a) { return {func(Op::Log, a.root_), a.dim_}; }
Expression sin(const Expression& a) { return {func(Op::Sin, a.root_), a.dim_}; }
Expression cos(const Expression& a) { return {func(Op::Cos, a.root_), a.dim_}; }
Expression sqrt(const Expression& a) { return {func(Op::Sqrt, a.root_), a.dim_}; }

} // namespace wavecert
