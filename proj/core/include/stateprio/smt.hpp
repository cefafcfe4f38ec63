#pragma once

#include "stateprio/value.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace stateprio::smt {

using Sort = Type;

std::string_view sort_name(Sort s);

/// SMT-LIB term over constants, declared symbols and applications.
/// Immutable; subterms are shared.
class Term {
public:
    enum class Kind { Const, Symbol, App };

    Term() : Term(constant(Value::boolean(true))) {}

    static Term constant(Value v);
    static Term symbol(std::string name, Sort sort);
    /// `op` is the SMT-LIB function symbol; the sort is inferred.
    static Term app(std::string op, std::vector<Term> args);

    Kind kind() const { return node_->kind; }
    Sort sort() const { return node_->sort; }
    const Value& value() const { return node_->value; }
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }

    bool is_true() const { return kind() == Kind::Const && value() == Value::boolean(true); }
    bool is_false() const { return kind() == Kind::Const && value() == Value::boolean(false); }

    /// SMT-LIB2 rendering.
    std::string str() const;
    void write(std::string& out) const;

private:
    struct Node {
        Kind kind = Kind::Const;
        Sort sort = Sort::Bool;
        Value value;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

Term tt();
Term ff();
/// n-ary connectives with unit simplification (empty and -> true, ...).
Term mk_and(std::vector<Term> args);
Term mk_or(std::vector<Term> args);
Term mk_not(Term t);
/// Numeric operands of mixed sort are coerced with to_real.
Term mk_eq(Term a, Term b);
Term mk_distinct(Term a, Term b);
Term mk_arith(std::string op, Term a, Term b);
Term mk_neg(Term a);
Term mk_cmp(std::string op, Term a, Term b);

/// Evaluates a ground-after-lookup term. `lookup` must resolve every symbol.
Value evaluate(const Term& t, const std::function<Value(const std::string&)>& lookup);

std::string format_value(const Value& v);

} // namespace stateprio::smt
