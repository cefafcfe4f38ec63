#pragma once

#include "stateprio/expr.hpp"
#include "stateprio/value.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace stateprio {

struct SourceSpan {
    std::string file;
    int line = 0; // 1-based; 0 means "no position"
    int column = 0;
    int length = 0;

    bool known() const { return line >= 1; }
};

std::string to_string(const SourceSpan& s);

struct Diagnostic {
    SourceSpan span;
    std::string message;
};

std::string to_string(const Diagnostic& d);

struct Assignment {
    std::string target;
    Expr expr;

    friend bool operator==(const Assignment& a, const Assignment& b)
    {
        return a.target == b.target && a.expr == b.expr;
    }
};

using UpdateVector = std::vector<Assignment>;

struct Edge {
    std::string source;
    std::string action;
    Expr guard = Expr::boolean(true);
    UpdateVector updates;
    std::string target;
    SourceSpan span;

    friend bool operator==(const Edge& a, const Edge& b)
    {
        return a.source == b.source && a.action == b.action && a.guard == b.guard && a.updates == b.updates
            && a.target == b.target;
    }
};

struct Automaton {
    std::string name;
    std::vector<std::string> locations; // declaration order
    std::string initial;
    std::vector<Edge> edges;
    SourceSpan span;

    std::optional<std::size_t> location_index(const std::string& loc) const;
    /// Actions used on this automaton's edges, sorted.
    std::vector<std::string> alphabet() const;
    bool has_action(const std::string& a) const;

    friend bool operator==(const Automaton& a, const Automaton& b)
    {
        return a.name == b.name && a.locations == b.locations && a.initial == b.initial && a.edges == b.edges;
    }
};

struct VarDecl {
    std::string name;
    Type type = Type::Int;
    Value init;
    SourceSpan span;

    friend bool operator==(const VarDecl& a, const VarDecl& b)
    {
        return a.name == b.name && a.type == b.type && a.init == b.init;
    }
};

/// A network of automata over shared variables. Immutable after
/// construction; lookup tables are built eagerly. Construction never throws
/// on ill-formed input so that validate_network can report every problem.
class Network {
public:
    Network() = default;
    Network(std::string name, std::vector<VarDecl> vars, std::vector<Automaton> automata,
        SourceSpan span = {});

    const std::string& name() const { return name_; }
    const std::vector<VarDecl>& vars() const { return vars_; }
    const std::vector<Automaton>& automata() const { return automata_; }
    const Automaton& automaton(std::size_t i) const { return automata_.at(i); }
    std::size_t size() const { return automata_.size(); }
    const SourceSpan& span() const { return span_; }

    std::optional<std::size_t> automaton_index(const std::string& name) const;
    std::optional<std::size_t> var_index(const std::string& name) const;
    std::optional<Type> var_type(const std::string& name) const;
    TypeLookup type_lookup() const;

    /// All actions of the network, sorted.
    const std::vector<std::string>& actions() const { return actions_; }
    bool has_action(const std::string& a) const;
    /// Indices (ascending) of the automata whose alphabet contains `action`.
    const std::vector<std::size_t>& holders(const std::string& action) const;

    /// Integer code of location `loc_index` of automaton `a`. When every
    /// location name of the automaton is a plain decimal numeral the code is
    /// the numeral's value; otherwise it is the 0-based declaration index.
    std::int64_t location_code(std::size_t a, std::size_t loc_index) const;
    std::optional<std::size_t> location_from_code(std::size_t a, std::int64_t code) const;
    bool numeric_locations(std::size_t a) const { return numeric_codes_.at(a); }

    /// True when positional variables p_<A> are present: one int variable per
    /// automaton, initialized to its initial location code, and assigned the
    /// target location code as the last update of every edge.
    bool positional() const { return positional_; }

    friend bool operator==(const Network& a, const Network& b)
    {
        return a.name_ == b.name_ && a.vars_ == b.vars_ && a.automata_ == b.automata_;
    }

private:
    std::string name_;
    std::vector<VarDecl> vars_;
    std::vector<Automaton> automata_;
    SourceSpan span_;

    std::unordered_map<std::string, std::size_t> automaton_ix_;
    std::unordered_map<std::string, std::size_t> var_ix_;
    std::vector<std::string> actions_;
    std::map<std::string, std::vector<std::size_t>> holders_;
    std::vector<std::vector<std::int64_t>> codes_;
    std::vector<bool> numeric_codes_;
    bool positional_ = false;
};

std::string positional_var_name(const std::string& automaton);

/// One diagnostic per violated well-formedness rule; empty means valid.
std::vector<Diagnostic> validate_network(const Network& net);

/// Valuation indexed like Network::vars().
using Valuation = std::vector<Value>;

ValueLookup value_lookup(const Network& net, const Valuation& v);

Value eval_expr(const Network& net, const Expr& e, const Valuation& v);

/// Applies `u` left to right; later assignments read earlier results.
Valuation apply_updates(const Network& net, const UpdateVector& u, Valuation v);

/// Location vector (one location index per automaton) plus a valuation.
struct State {
    std::vector<std::size_t> locs;
    Valuation vals;

    friend bool operator==(const State& a, const State& b) = default;
    friend bool operator<(const State& a, const State& b)
    {
        if (a.locs != b.locs)
            return a.locs < b.locs;
        return std::lexicographical_compare(a.vals.begin(), a.vals.end(), b.vals.begin(), b.vals.end());
    }
};

struct StateHash {
    std::size_t operator()(const State& s) const;
};

/// "(5, 4) {x=0}"
std::string format_state(const Network& net, const State& s);
/// "(A0.5, A1.4) {x=0}"
std::string format_state_qualified(const Network& net, const State& s);

struct Literal {
    std::string automaton;
    std::string location;
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of (possibly negated) location literals.
struct StateFormula {
    std::vector<Literal> literals;
};

std::string to_string(const StateFormula& f);

/// Throws Error on unknown automaton or location.
bool state_satisfies(const Network& net, const State& s, const StateFormula& f);

struct Priority {
    std::string blockee;
    std::string blocker;

    friend auto operator<=>(const Priority&, const Priority&) = default;
};

/// A (partial) snapshot of the unfolding at one step. loc maps automaton
/// names to location names; excluded carries negated query literals, which
/// only occur in configurations derived from an error formula.
struct Configuration {
    std::map<std::string, std::string> loc;
    std::map<std::string, Value> var;
    std::map<std::string, bool> act;
    std::map<std::string, std::set<std::string>> excluded;
    int step = 0;
    /// Names of step variables whose value was absent from the solver model.
    std::set<std::string> defaulted;

    bool empty_snapshot() const { return loc.empty() && var.empty() && excluded.empty(); }
    /// Equality of loc/var/excluded; step, act and defaults are ignored.
    bool same_snapshot(const Configuration& o) const;
    /// Canonical order over snapshots.
    friend bool snapshot_less(const Configuration& a, const Configuration& b);
    /// The single action mapped to true, if exactly one is.
    std::optional<std::string> true_action() const;
};

std::string format_snapshot(const Configuration& c);

/// Does concrete state `s` match every constraint in `c`'s snapshot?
bool config_matches(const Network& net, const State& s, const Configuration& c);

/// Full snapshot of `s` at `step`.
Configuration state_to_config(const Network& net, const State& s, int step = 0);

/// Inverse of state_to_config. Throws Error unless c covers every automaton
/// and variable with known names.
State config_to_state(const Network& net, const Configuration& c);

Configuration formula_to_config(const Network& net, const StateFormula& f);

struct StatefulPriority {
    Configuration pre;
    Priority prio;
};

/// Identity over (snapshot, priority); step is ignored.
bool same_stateful(const StatefulPriority& a, const StatefulPriority& b);
bool stateful_less(const StatefulPriority& a, const StatefulPriority& b);

} // namespace stateprio
