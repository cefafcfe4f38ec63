#include "stateprio/smt.hpp"

#include "stateprio/error.hpp"

namespace stateprio::smt {

std::string_view sort_name(Sort s)
{
    switch (s) {
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
    case Sort::Bool: return "Bool";
    }
    return "?";
}

Term Term::constant(Value v)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->sort = v.type();
    n->value = std::move(v);
    return Term(std::move(n));
}

Term Term::symbol(std::string name, Sort sort)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Symbol;
    n->sort = sort;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::app(std::string op, std::vector<Term> args)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    if (op == "+" || op == "-" || op == "*") {
        n->sort = Sort::Int;
        for (const auto& a : args)
            if (a.sort() == Sort::Real)
                n->sort = Sort::Real;
    } else if (op == "to_real") {
        n->sort = Sort::Real;
    } else {
        n->sort = Sort::Bool;
    }
    n->name = std::move(op);
    n->args = std::move(args);
    return Term(std::move(n));
}

std::string format_value(const Value& v)
{
    switch (v.type()) {
    case Type::Bool: return v.as_bool() ? "true" : "false";
    case Type::Int: {
        std::int64_t i = v.as_int();
        if (i < 0)
            return "(- " + std::to_string(i).substr(1) + ")";
        return std::to_string(i);
    }
    case Type::Real: {
        Rational r = v.as_rational();
        bool neg = r.num() < 0;
        std::string mag = std::to_string(r.num()).substr(neg ? 1 : 0);
        std::string body = r.is_integer() ? mag + ".0" : "(/ " + mag + ".0 " + std::to_string(r.den()) + ".0)";
        return neg ? "(- " + body + ")" : body;
    }
    }
    return "";
}

void Term::write(std::string& out) const
{
    switch (kind()) {
    case Kind::Const: out += format_value(value()); return;
    case Kind::Symbol: out += name(); return;
    case Kind::App:
        out += '(';
        out += name();
        for (const auto& a : args()) {
            out += ' ';
            a.write(out);
        }
        out += ')';
        return;
    }
}

std::string Term::str() const
{
    std::string out;
    write(out);
    return out;
}

Term tt() { return Term::constant(Value::boolean(true)); }
Term ff() { return Term::constant(Value::boolean(false)); }

Term mk_and(std::vector<Term> args)
{
    std::vector<Term> keep;
    for (auto& a : args) {
        if (a.is_false())
            return ff();
        if (!a.is_true())
            keep.push_back(std::move(a));
    }
    if (keep.empty())
        return tt();
    if (keep.size() == 1)
        return keep.front();
    return Term::app("and", std::move(keep));
}

Term mk_or(std::vector<Term> args)
{
    std::vector<Term> keep;
    for (auto& a : args) {
        if (a.is_true())
            return tt();
        if (!a.is_false())
            keep.push_back(std::move(a));
    }
    if (keep.empty())
        return ff();
    if (keep.size() == 1)
        return keep.front();
    return Term::app("or", std::move(keep));
}

Term mk_not(Term t)
{
    if (t.is_true())
        return ff();
    if (t.is_false())
        return tt();
    return Term::app("not", {std::move(t)});
}

namespace {

Term coerce(Term t, Sort target)
{
    if (target == Sort::Real && t.sort() == Sort::Int) {
        if (t.kind() == Term::Kind::Const)
            return Term::constant(Value::real(t.value().as_rational()));
        return Term::app("to_real", {std::move(t)});
    }
    return t;
}

std::pair<Term, Term> unify(Term a, Term b)
{
    if (a.sort() == Sort::Real || b.sort() == Sort::Real)
        return {coerce(std::move(a), Sort::Real), coerce(std::move(b), Sort::Real)};
    return {std::move(a), std::move(b)};
}

} // namespace

Term mk_eq(Term a, Term b)
{
    auto [x, y] = unify(std::move(a), std::move(b));
    return Term::app("=", {std::move(x), std::move(y)});
}

Term mk_distinct(Term a, Term b)
{
    auto [x, y] = unify(std::move(a), std::move(b));
    return Term::app("distinct", {std::move(x), std::move(y)});
}

Term mk_arith(std::string op, Term a, Term b)
{
    auto [x, y] = unify(std::move(a), std::move(b));
    return Term::app(std::move(op), {std::move(x), std::move(y)});
}

Term mk_neg(Term a) { return Term::app("-", {std::move(a)}); }

Term mk_cmp(std::string op, Term a, Term b)
{
    auto [x, y] = unify(std::move(a), std::move(b));
    return Term::app(std::move(op), {std::move(x), std::move(y)});
}

Value evaluate(const Term& t, const std::function<Value(const std::string&)>& lookup)
{
    switch (t.kind()) {
    case Term::Kind::Const: return t.value();
    case Term::Kind::Symbol: return lookup(t.name());
    case Term::Kind::App: break;
    }
    const std::string& op = t.name();
    std::vector<Value> a;
    a.reserve(t.args().size());
    for (const auto& x : t.args())
        a.push_back(evaluate(x, lookup));
    auto num = [](const Value& v) { return v.as_rational(); };
    auto wrap = [&](Rational r) { return t.sort() == Sort::Int ? Value::integer(r.num()) : Value::real(r); };
    if (op == "and") {
        for (const auto& v : a)
            if (!v.as_bool())
                return Value::boolean(false);
        return Value::boolean(true);
    }
    if (op == "or") {
        for (const auto& v : a)
            if (v.as_bool())
                return Value::boolean(true);
        return Value::boolean(false);
    }
    if (op == "not")
        return Value::boolean(!a.at(0).as_bool());
    if (op == "to_real")
        return Value::real(num(a.at(0)));
    if (op == "=" || op == "distinct") {
        bool eq = a.at(0).type() == Type::Bool ? a[0].as_bool() == a.at(1).as_bool() : num(a[0]) == num(a.at(1));
        return Value::boolean(op == "=" ? eq : !eq);
    }
    if (op == "<")
        return Value::boolean(num(a.at(0)) < num(a.at(1)));
    if (op == "<=")
        return Value::boolean(num(a.at(0)) <= num(a.at(1)));
    if (op == ">")
        return Value::boolean(num(a.at(0)) > num(a.at(1)));
    if (op == ">=")
        return Value::boolean(num(a.at(0)) >= num(a.at(1)));
    if (op == "-" && a.size() == 1)
        return wrap(-num(a[0]));
    if (op == "+" || op == "-" || op == "*") {
        Rational acc = num(a.at(0));
        for (std::size_t i = 1; i < a.size(); ++i)
            acc = op == "+" ? acc + num(a[i]) : op == "-" ? acc - num(a[i]) : acc * num(a[i]);
        return wrap(acc);
    }
    throw EvalError("cannot evaluate SMT operator '" + op + "'");
}

} // namespace stateprio::smt
