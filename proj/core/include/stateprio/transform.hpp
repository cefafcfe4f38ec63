#pragma once

#include "stateprio/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace stateprio {

struct GuardEdit {
    std::string automaton;
    std::size_t edge = 0; // index into the automaton's edges
    Expr old_guard;
    Expr new_guard;
    std::vector<StatefulPriority> triggers;
    /// Case of the guard rewrite: 1 adds the position disjunction, 2 also
    /// disables the edge's source, 3 leaves the guard alone.
    int gamma_case = 3;
};

struct TransformOutcome {
    Network transformed;
    std::vector<GuardEdit> edits; // only edges whose guard changed
};

/// Guard rewriting for edge `edge` of automaton `a`. Matching stateful
/// priorities are applied in snapshot order; each contributes
/// `(p_A0 != l0 || p_A1 != l1 ...)`, plus `p_A != source` when the
/// automaton has a blocker edge from the same source to another target.
/// `gamma_case` receives the strongest case applied (3 when none).
Expr gamma(const Network& net, std::size_t a, std::size_t edge, std::span<const StatefulPriority> sp,
    int* gamma_case = nullptr, std::vector<StatefulPriority>* triggers = nullptr);

/// Adds one positional variable per automaton (when sp is non-empty),
/// rewrites guards and appends `p_A := target` to every edge. Throws
/// TransformError for positional input nets, name clashes, and priorities
/// that mention unknown automata, locations or actions.
TransformOutcome transform_network(const Network& net, std::span<const StatefulPriority> sp);

/// Drops positional variables from a state of a transformed network.
State project(const Network& transformed, const State& s);

/// Network without its positional variables, for mapping states back.
std::vector<std::size_t> original_var_indices(const Network& transformed);

std::string format_edit(const Network& net, const GuardEdit& e);

} // namespace stateprio
