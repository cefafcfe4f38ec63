#pragma once

#include "stateprio/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stateprio {

/// One move of the network. Single transitions have one participant;
/// broadcast transitions have every automaton holding the action.
struct Transition {
    std::string action;
    std::vector<std::size_t> participants; // automaton indices, ascending
    std::vector<std::size_t> edges;        // edge index per participant
    State target;
};

/// Closed intervals for numeric variables; makes explicit exploration
/// finite. Variables without an entry use the default interval.
struct DomainBounds {
    Rational default_lo = Rational(-64);
    Rational default_hi = Rational(64);
    std::map<std::string, std::pair<Rational, Rational>> per_var;

    static DomainBounds uniform(std::int64_t lo, std::int64_t hi);
    bool contains(const Network& net, const State& s) const;
};

State initial_state(const Network& net);

/// All enabled transitions from `s`: single transitions on actions private
/// to one automaton and full-synchronization transitions on shared actions
/// (one per combination of enabled edges). A shared action with any holder
/// lacking an enabled edge is blocked. Broadcast updates apply in ascending
/// automaton order.
std::vector<Transition> successors(const Network& net, const State& s);

bool is_deadlock(const Network& net, const State& s);

/// Result of bounded breadth-first exploration.
struct ReachResult {
    std::vector<State> states; // BFS discovery order; states[0] is initial
    std::unordered_map<State, std::size_t, StateHash> index;
    struct Parent {
        std::size_t from = 0;
        std::string action;
    };
    std::vector<std::optional<Parent>> parent;
    std::vector<int> depth;
    /// Successor states dropped because a variable left its bounds.
    std::size_t pruned = 0;
    /// True when the frontier emptied before the depth limit, i.e. the
    /// result is the complete (bounded-domain) reachable set.
    bool saturated = false;

    bool contains(const State& s) const { return index.count(s) != 0; }
    /// Witness path from the initial state: (action, state) pairs, the first
    /// pair carrying an empty action.
    std::vector<std::pair<std::string, State>> path_to(std::size_t i) const;
};

/// All states reachable within `depth` steps (negative depth: until
/// saturation) whose variables stay within `bounds`.
ReachResult bfs_reach(const Network& net, int depth, const DomainBounds& bounds = {});

/// Reachable states (within the bound) with at least one transition into a
/// state satisfying `f`.
std::vector<State> preerrors_oracle(const Network& net, const StateFormula& f, int depth,
    const DomainBounds& bounds = {});

/// True iff some transition on `action` from `pre` lands in a state matching
/// one of `errors`. Throws Error if the action is unknown.
bool action_reaches_error(const Network& net, const State& pre, const std::string& action,
    std::span<const Configuration> errors);
bool action_reaches_error(const Network& net, const State& pre, const std::string& action,
    std::span<const State> errors);

/// No preError (within the bound) has an action with one transition into an
/// `f`-state and another into a non-`f` state. Holds only up to the bound.
bool check_semantical_restriction(const Network& net, const StateFormula& f, int depth,
    const DomainBounds& bounds = {});

/// Alphabets pairwise disjoint and no two edges share an action.
bool check_syntactical_restriction(const Network& net);

/// `step k: <action> -> (locs) {vars}`; step 0 uses the action "init".
std::string format_trace_line(const Network& net, int step, const std::string& action, const State& s);

} // namespace stateprio
