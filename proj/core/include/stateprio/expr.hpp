#pragma once

#include "stateprio/value.hpp"

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace stateprio {

enum class Op {
    Literal,
    Var,
    Neg,
    Not,
    Add,
    Sub,
    Mul,
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
    And,
    Or,
};

std::string_view op_symbol(Op op);
bool is_comparison(Op op);
bool is_arithmetic(Op op);

/// Immutable expression tree with shared subterms. Copying is cheap.
///
/// Unary minus applied to a numeric literal is always folded into the
/// literal, so the printed form of a tree parses back to the same tree.
class Expr {
public:
    Expr() : Expr(lit(Value::boolean(true))) {}

    static Expr lit(Value v);
    static Expr boolean(bool b) { return lit(Value::boolean(b)); }
    static Expr integer(std::int64_t i) { return lit(Value::integer(i)); }
    static Expr var(std::string name);
    static Expr unary(Op op, Expr operand);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    /// Left-folded conjunction/disjunction; empty input yields true/false.
    static Expr conj(const std::vector<Expr>& items);
    static Expr disj(const std::vector<Expr>& items);

    Op op() const { return node_->op; }
    const Value& value() const { return node_->value; }
    const std::string& name() const { return node_->name; }
    const std::vector<Expr>& args() const { return node_->args; }
    const Expr& arg(std::size_t i) const { return node_->args.at(i); }

    bool is_literal() const { return op() == Op::Literal; }
    bool is_true() const { return is_literal() && value() == Value::boolean(true); }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b);

    void collect_vars(std::set<std::string>& out) const;
    /// True when no variable occurs in the tree.
    bool is_constant() const;

    /// Replaces variables by expressions according to `subst`. Variables not
    /// covered by the map are kept.
    Expr substitute(const std::function<std::optional<Expr>(const std::string&)>& subst) const;

private:
    struct Node {
        Op op = Op::Literal;
        Value value;
        std::string name;
        std::vector<Expr> args;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Source-style rendering with minimal parentheses; `!=` and `==` for
/// (in)equality, `&&`/`||` for connectives.
std::string to_string(const Expr& e);

/// Variable lookup used by evaluation and type checking.
using TypeLookup = std::function<std::optional<Type>(const std::string&)>;
using ValueLookup = std::function<std::optional<Value>(const std::string&)>;

/// Type of `e`, or EvalError describing the first typing violation.
/// Int and real operands mix freely; the result is real.
Type type_of(const Expr& e, const TypeLookup& types);

/// True when every multiplication has at least one constant operand.
bool is_linear(const Expr& e);

/// Evaluates `e` exactly. Throws EvalError on unbound variables, type
/// mismatches, or integer overflow.
Value eval(const Expr& e, const ValueLookup& vals);

} // namespace stateprio
