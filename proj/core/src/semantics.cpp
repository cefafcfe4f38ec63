#include "stateprio/semantics.hpp"

#include "stateprio/error.hpp"

#include <deque>

namespace stateprio {

DomainBounds DomainBounds::uniform(std::int64_t lo, std::int64_t hi)
{
    DomainBounds b;
    b.default_lo = Rational(lo);
    b.default_hi = Rational(hi);
    return b;
}

bool DomainBounds::contains(const Network& net, const State& s) const
{
    for (std::size_t i = 0; i < s.vals.size(); ++i) {
        const Value& v = s.vals[i];
        if (v.type() == Type::Bool)
            continue;
        Rational lo = default_lo;
        Rational hi = default_hi;
        if (auto it = per_var.find(net.vars()[i].name); it != per_var.end()) {
            lo = it->second.first;
            hi = it->second.second;
        }
        Rational r = v.as_rational();
        if (r < lo || hi < r)
            return false;
    }
    return true;
}

State initial_state(const Network& net)
{
    State s;
    for (const auto& a : net.automata()) {
        auto l = a.location_index(a.initial);
        if (!l)
            throw Error("automaton '" + a.name + "' has an undeclared initial location");
        s.locs.push_back(*l);
    }
    for (const auto& v : net.vars())
        s.vals.push_back(v.init);
    return s;
}

namespace {

/// Edge indices of automaton `a` on `action` enabled in `s`.
std::vector<std::size_t> enabled_edges(const Network& net, std::size_t a, const std::string& action, const State& s)
{
    std::vector<std::size_t> out;
    const Automaton& aut = net.automaton(a);
    const std::string& here = aut.locations.at(s.locs[a]);
    for (std::size_t e = 0; e < aut.edges.size(); ++e) {
        const Edge& edge = aut.edges[e];
        if (edge.action != action || edge.source != here)
            continue;
        if (eval_expr(net, edge.guard, s.vals).as_bool())
            out.push_back(e);
    }
    return out;
}

} // namespace

std::vector<Transition> successors(const Network& net, const State& s)
{
    std::vector<Transition> out;
    for (const auto& action : net.actions()) {
        const auto& holders = net.holders(action);
        std::vector<std::vector<std::size_t>> choices;
        bool blocked = false;
        for (auto h : holders) {
            choices.push_back(enabled_edges(net, h, action, s));
            if (choices.back().empty()) {
                blocked = true;
                break;
            }
        }
        if (blocked)
            continue;
        // odometer over the cartesian product of enabled edges
        std::vector<std::size_t> pick(holders.size(), 0);
        for (;;) {
            Transition t;
            t.action = action;
            t.participants = holders;
            t.target = s;
            for (std::size_t k = 0; k < holders.size(); ++k) {
                const Automaton& aut = net.automaton(holders[k]);
                const Edge& edge = aut.edges[choices[k][pick[k]]];
                t.edges.push_back(choices[k][pick[k]]);
                t.target.locs[holders[k]] = *aut.location_index(edge.target);
                t.target.vals = apply_updates(net, edge.updates, std::move(t.target.vals));
            }
            out.push_back(std::move(t));
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == choices[k].size())
                pick[k++] = 0;
            if (k == pick.size())
                break;
        }
    }
    return out;
}

bool is_deadlock(const Network& net, const State& s) { return successors(net, s).empty(); }

std::vector<std::pair<std::string, State>> ReachResult::path_to(std::size_t i) const
{
    std::vector<std::pair<std::string, State>> path;
    std::optional<std::size_t> cur = i;
    while (cur) {
        const auto& p = parent.at(*cur);
        path.emplace_back(p ? p->action : std::string(), states.at(*cur));
        cur = p ? std::optional<std::size_t>(p->from) : std::nullopt;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

ReachResult bfs_reach(const Network& net, int depth, const DomainBounds& bounds)
{
    ReachResult r;
    State init = initial_state(net);
    r.states.push_back(init);
    r.index.emplace(init, 0);
    r.parent.emplace_back(std::nullopt);
    r.depth.push_back(0);

    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        std::size_t cur = frontier.front();
        if (depth >= 0 && r.depth[cur] >= depth)
            break;
        frontier.pop_front();
        State from = r.states[cur];
        for (auto& t : successors(net, from)) {
            if (!bounds.contains(net, t.target)) {
                ++r.pruned;
                continue;
            }
            if (r.index.count(t.target))
                continue;
            std::size_t id = r.states.size();
            r.index.emplace(t.target, id);
            r.states.push_back(std::move(t.target));
            r.parent.push_back(ReachResult::Parent{cur, t.action});
            r.depth.push_back(r.depth[cur] + 1);
            frontier.push_back(id);
        }
    }
    r.saturated = frontier.empty();
    return r;
}

std::vector<State> preerrors_oracle(const Network& net, const StateFormula& f, int depth, const DomainBounds& bounds)
{
    ReachResult r = bfs_reach(net, depth, bounds);
    std::vector<State> out;
    for (const auto& s : r.states) {
        for (const auto& t : successors(net, s)) {
            if (state_satisfies(net, t.target, f)) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

bool action_reaches_error(const Network& net, const State& pre, const std::string& action,
    std::span<const Configuration> errors)
{
    if (!net.has_action(action))
        throw Error("unknown action '" + action + "'");
    for (const auto& t : successors(net, pre)) {
        if (t.action != action)
            continue;
        for (const auto& e : errors)
            if (config_matches(net, t.target, e))
                return true;
    }
    return false;
}

bool action_reaches_error(const Network& net, const State& pre, const std::string& action,
    std::span<const State> errors)
{
    if (!net.has_action(action))
        throw Error("unknown action '" + action + "'");
    for (const auto& t : successors(net, pre)) {
        if (t.action != action)
            continue;
        if (std::find(errors.begin(), errors.end(), t.target) != errors.end())
            return true;
    }
    return false;
}

bool check_semantical_restriction(const Network& net, const StateFormula& f, int depth, const DomainBounds& bounds)
{
    for (const auto& pre : preerrors_oracle(net, f, depth, bounds)) {
        std::map<std::string, std::pair<bool, bool>> hits; // action -> (reaches f, avoids f)
        for (const auto& t : successors(net, pre)) {
            auto& h = hits[t.action];
            (state_satisfies(net, t.target, f) ? h.first : h.second) = true;
        }
        for (const auto& [action, h] : hits)
            if (h.first && h.second)
                return false;
    }
    return true;
}

bool check_syntactical_restriction(const Network& net)
{
    for (const auto& action : net.actions()) {
        if (net.holders(action).size() > 1)
            return false;
        std::size_t uses = 0;
        for (const auto& e : net.automaton(net.holders(action).front()).edges)
            uses += e.action == action;
        if (uses > 1)
            return false;
    }
    return true;
}

std::string format_trace_line(const Network& net, int step, const std::string& action, const State& s)
{
    return "step " + std::to_string(step) + ": " + (action.empty() ? std::string("init") : action) + " -> "
        + format_state(net, s);
}

} // namespace stateprio
