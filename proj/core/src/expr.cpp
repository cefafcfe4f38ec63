#include "stateprio/expr.hpp"

#include "stateprio/error.hpp"

#include <sstream>

namespace stateprio {

std::string_view op_symbol(Op op)
{
    switch (op) {
    case Op::Neg: return "-";
    case Op::Not: return "!";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::Ge: return ">=";
    case Op::Gt: return ">";
    case Op::And: return "&&";
    case Op::Or: return "||";
    case Op::Literal:
    case Op::Var: break;
    }
    return "";
}

bool is_comparison(Op op)
{
    return op == Op::Lt || op == Op::Le || op == Op::Eq || op == Op::Ne || op == Op::Ge || op == Op::Gt;
}

bool is_arithmetic(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Neg; }

Expr Expr::lit(Value v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Literal;
    n->value = std::move(v);
    return Expr(std::move(n));
}

Expr Expr::var(std::string name)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand)
{
    if (op != Op::Neg && op != Op::Not)
        throw EvalError("not a unary operator");
    if (op == Op::Neg && operand.is_literal()) {
        const Value& v = operand.value();
        if (v.type() == Type::Int)
            return integer(checked::sub(0, v.as_int()));
        if (v.type() == Type::Real)
            return lit(Value::real(-v.as_rational()));
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = {std::move(operand)};
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs)
{
    if (op == Op::Literal || op == Op::Var || op == Op::Neg || op == Op::Not)
        throw EvalError("not a binary operator");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = {std::move(lhs), std::move(rhs)};
    return Expr(std::move(n));
}

Expr Expr::conj(const std::vector<Expr>& items)
{
    if (items.empty())
        return boolean(true);
    Expr acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i)
        acc = binary(Op::And, acc, items[i]);
    return acc;
}

Expr Expr::disj(const std::vector<Expr>& items)
{
    if (items.empty())
        return boolean(false);
    Expr acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i)
        acc = binary(Op::Or, acc, items[i]);
    return acc;
}

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.op() != b.op())
        return false;
    switch (a.op()) {
    case Op::Literal: return a.value() == b.value();
    case Op::Var: return a.name() == b.name();
    default: return a.args() == b.args();
    }
}

void Expr::collect_vars(std::set<std::string>& out) const
{
    if (op() == Op::Var) {
        out.insert(name());
        return;
    }
    for (const auto& a : args())
        a.collect_vars(out);
}

bool Expr::is_constant() const
{
    std::set<std::string> vs;
    collect_vars(vs);
    return vs.empty();
}

Expr Expr::substitute(const std::function<std::optional<Expr>(const std::string&)>& subst) const
{
    switch (op()) {
    case Op::Literal: return *this;
    case Op::Var: {
        if (auto r = subst(name()))
            return *r;
        return *this;
    }
    case Op::Neg:
    case Op::Not: return unary(op(), arg(0).substitute(subst));
    default: return binary(op(), arg(0).substitute(subst), arg(1).substitute(subst));
    }
}

namespace {

int precedence(const Expr& e)
{
    switch (e.op()) {
    case Op::Or: return 1;
    case Op::And: return 2;
    case Op::Not: return 3;
    case Op::Lt:
    case Op::Le:
    case Op::Eq:
    case Op::Ne:
    case Op::Ge:
    case Op::Gt: return 4;
    case Op::Add:
    case Op::Sub: return 5;
    case Op::Mul: return 6;
    case Op::Neg: return 7;
    case Op::Literal:
        if (e.value().type() != Type::Bool && e.value().as_rational() < Rational(0))
            return 7;
        return 8;
    case Op::Var: return 8;
    }
    return 8;
}

void print(std::ostream& os, const Expr& e);

void print_child(std::ostream& os, const Expr& child, bool parens)
{
    if (parens)
        os << '(';
    print(os, child);
    if (parens)
        os << ')';
}

void print(std::ostream& os, const Expr& e)
{
    switch (e.op()) {
    case Op::Literal: os << e.value().str(); return;
    case Op::Var: os << e.name(); return;
    case Op::Neg:
    case Op::Not:
        os << op_symbol(e.op());
        print_child(os, e.arg(0), precedence(e.arg(0)) < precedence(e));
        return;
    default: break;
    }
    int p = precedence(e);
    bool non_assoc = is_comparison(e.op());
    print_child(os, e.arg(0), non_assoc ? precedence(e.arg(0)) <= p : precedence(e.arg(0)) < p);
    os << ' ' << op_symbol(e.op()) << ' ';
    print_child(os, e.arg(1), precedence(e.arg(1)) <= p);
}

} // namespace

std::string to_string(const Expr& e)
{
    std::ostringstream os;
    print(os, e);
    return os.str();
}

Type type_of(const Expr& e, const TypeLookup& types)
{
    auto numeric = [](Type t) { return t == Type::Int || t == Type::Real; };
    switch (e.op()) {
    case Op::Literal: return e.value().type();
    case Op::Var: {
        auto t = types(e.name());
        if (!t)
            throw EvalError("unknown variable '" + e.name() + "'");
        return *t;
    }
    case Op::Neg: {
        Type t = type_of(e.arg(0), types);
        if (!numeric(t))
            throw EvalError("unary '-' applied to a boolean in '" + to_string(e) + "'");
        return t;
    }
    case Op::Not: {
        if (type_of(e.arg(0), types) != Type::Bool)
            throw EvalError("'!' applied to a number in '" + to_string(e) + "'");
        return Type::Bool;
    }
    case Op::And:
    case Op::Or: {
        if (type_of(e.arg(0), types) != Type::Bool || type_of(e.arg(1), types) != Type::Bool)
            throw EvalError("boolean connective over numbers in '" + to_string(e) + "'");
        return Type::Bool;
    }
    case Op::Eq:
    case Op::Ne: {
        Type l = type_of(e.arg(0), types);
        Type r = type_of(e.arg(1), types);
        if ((l == Type::Bool) != (r == Type::Bool))
            throw EvalError("comparison between boolean and number in '" + to_string(e) + "'");
        return Type::Bool;
    }
    case Op::Lt:
    case Op::Le:
    case Op::Ge:
    case Op::Gt: {
        if (!numeric(type_of(e.arg(0), types)) || !numeric(type_of(e.arg(1), types)))
            throw EvalError("ordering comparison over booleans in '" + to_string(e) + "'");
        return Type::Bool;
    }
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
        Type l = type_of(e.arg(0), types);
        Type r = type_of(e.arg(1), types);
        if (!numeric(l) || !numeric(r))
            throw EvalError("arithmetic over booleans in '" + to_string(e) + "'");
        return (l == Type::Real || r == Type::Real) ? Type::Real : Type::Int;
    }
    }
    throw EvalError("malformed expression");
}

bool is_linear(const Expr& e)
{
    if (e.op() == Op::Mul && !e.arg(0).is_constant() && !e.arg(1).is_constant())
        return false;
    for (const auto& a : e.args())
        if (!is_linear(a))
            return false;
    return true;
}

namespace {

Value arith(Op op, const Value& a, const Value& b)
{
    if (a.type() == Type::Int && b.type() == Type::Int) {
        std::int64_t x = a.as_int();
        std::int64_t y = b.as_int();
        switch (op) {
        case Op::Add: return Value::integer(checked::add(x, y));
        case Op::Sub: return Value::integer(checked::sub(x, y));
        default: return Value::integer(checked::mul(x, y));
        }
    }
    Rational x = a.as_rational();
    Rational y = b.as_rational();
    switch (op) {
    case Op::Add: return Value::real(x + y);
    case Op::Sub: return Value::real(x - y);
    default: return Value::real(x * y);
    }
}

bool compare(Op op, const Value& a, const Value& b)
{
    if (a.type() == Type::Bool || b.type() == Type::Bool) {
        bool x = a.as_bool();
        bool y = b.as_bool();
        if (op == Op::Eq)
            return x == y;
        if (op == Op::Ne)
            return x != y;
        throw EvalError("ordering comparison over booleans");
    }
    auto c = a.as_rational() <=> b.as_rational();
    switch (op) {
    case Op::Lt: return c < 0;
    case Op::Le: return c <= 0;
    case Op::Eq: return c == 0;
    case Op::Ne: return c != 0;
    case Op::Ge: return c >= 0;
    default: return c > 0;
    }
}

} // namespace

Value eval(const Expr& e, const ValueLookup& vals)
{
    switch (e.op()) {
    case Op::Literal: return e.value();
    case Op::Var: {
        auto v = vals(e.name());
        if (!v)
            throw EvalError("unbound variable '" + e.name() + "'");
        return *v;
    }
    case Op::Neg: {
        Value v = eval(e.arg(0), vals);
        if (v.type() == Type::Int)
            return Value::integer(checked::sub(0, v.as_int()));
        if (v.type() == Type::Real)
            return Value::real(-v.as_rational());
        throw EvalError("unary '-' applied to a boolean");
    }
    case Op::Not: return Value::boolean(!eval(e.arg(0), vals).as_bool());
    case Op::And: return Value::boolean(eval(e.arg(0), vals).as_bool() && eval(e.arg(1), vals).as_bool());
    case Op::Or: return Value::boolean(eval(e.arg(0), vals).as_bool() || eval(e.arg(1), vals).as_bool());
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
        Value a = eval(e.arg(0), vals);
        Value b = eval(e.arg(1), vals);
        if (a.type() == Type::Bool || b.type() == Type::Bool)
            throw EvalError("arithmetic over booleans");
        return arith(e.op(), a, b);
    }
    default: return Value::boolean(compare(e.op(), eval(e.arg(0), vals), eval(e.arg(1), vals)));
    }
}

} // namespace stateprio
