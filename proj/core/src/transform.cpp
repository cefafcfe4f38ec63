#include "stateprio/transform.hpp"

#include "stateprio/error.hpp"

#include <algorithm>

namespace stateprio {

namespace {

Expr position_differs(const Network& net, const Configuration& c)
{
    std::vector<Expr> items;
    for (std::size_t a = 0; a < net.size(); ++a) {
        const Automaton& aut = net.automaton(a);
        auto it = c.loc.find(aut.name);
        if (it == c.loc.end())
            continue;
        auto l = aut.location_index(it->second);
        items.push_back(Expr::binary(Op::Ne, Expr::var(positional_var_name(aut.name)),
            Expr::integer(net.location_code(a, *l))));
    }
    return Expr::disj(items);
}

void check_priority(const Network& net, const StatefulPriority& sp)
{
    for (const auto& [a, l] : sp.pre.loc) {
        auto ai = net.automaton_index(a);
        if (!ai)
            throw TransformError("priority mentions unknown automaton '" + a + "'");
        if (!net.automaton(*ai).location_index(l))
            throw TransformError("priority mentions unknown location '" + a + "." + l + "'");
    }
    for (const auto& [v, val] : sp.pre.var)
        if (!net.var_index(v))
            throw TransformError("priority mentions unknown variable '" + v + "'");
    for (const auto* act : {&sp.prio.blockee, &sp.prio.blocker})
        if (!net.has_action(*act))
            throw TransformError("priority mentions unknown action '" + *act + "'");
    if (sp.pre.loc.empty())
        throw TransformError("priority has an empty preError configuration");
}

} // namespace

Expr gamma(const Network& net, std::size_t a, std::size_t edge, std::span<const StatefulPriority> sp,
    int* gamma_case, std::vector<StatefulPriority>* triggers)
{
    const Automaton& aut = net.automaton(a);
    const Edge& e = aut.edges.at(edge);
    std::vector<StatefulPriority> ordered(sp.begin(), sp.end());
    std::sort(ordered.begin(), ordered.end(), stateful_less);

    Expr g = e.guard;
    int strongest = 3;
    for (const auto& p : ordered) {
        if (p.prio.blockee != e.action)
            continue;
        auto here = p.pre.loc.find(aut.name);
        if (here == p.pre.loc.end() || here->second != e.source || e.target == here->second)
            continue;
        bool blocker_elsewhere = std::any_of(aut.edges.begin(), aut.edges.end(), [&](const Edge& d) {
            return d.source == e.source && d.target != e.target && d.action == p.prio.blocker;
        });
        g = Expr::binary(Op::And, g, position_differs(net, p.pre));
        if (blocker_elsewhere) {
            auto src = aut.location_index(e.source);
            g = Expr::binary(Op::And, g,
                Expr::binary(Op::Ne, Expr::var(positional_var_name(aut.name)),
                    Expr::integer(net.location_code(a, *src))));
            strongest = std::min(strongest, 2);
        } else {
            strongest = std::min(strongest, 1);
        }
        if (triggers)
            triggers->push_back(p);
    }
    if (gamma_case)
        *gamma_case = strongest;
    return g;
}

TransformOutcome transform_network(const Network& net, std::span<const StatefulPriority> sp)
{
    if (net.positional())
        throw TransformError("network '" + net.name() + "' already carries positional variables");
    for (const auto& p : sp)
        check_priority(net, p);
    if (sp.empty())
        return {net, {}};

    std::vector<VarDecl> vars = net.vars();
    for (std::size_t a = 0; a < net.size(); ++a) {
        const Automaton& aut = net.automaton(a);
        std::string name = positional_var_name(aut.name);
        if (net.var_index(name) || net.automaton_index(name) || net.has_action(name))
            throw TransformError("positional variable '" + name + "' clashes with an existing name");
        VarDecl v;
        v.name = name;
        v.type = Type::Int;
        v.init = Value::integer(net.location_code(a, *aut.location_index(aut.initial)));
        vars.push_back(std::move(v));
    }

    TransformOutcome out;
    std::vector<Automaton> automata;
    for (std::size_t a = 0; a < net.size(); ++a) {
        Automaton aut = net.automaton(a);
        for (std::size_t i = 0; i < aut.edges.size(); ++i) {
            Edge& e = aut.edges[i];
            int gcase = 3;
            std::vector<StatefulPriority> trig;
            Expr g = gamma(net, a, i, sp, &gcase, &trig);
            if (gcase != 3)
                out.edits.push_back({aut.name, i, e.guard, g, std::move(trig), gcase});
            e.guard = g;
            auto t = aut.location_index(e.target);
            e.updates.push_back({positional_var_name(aut.name), Expr::integer(net.location_code(a, *t))});
        }
        automata.push_back(std::move(aut));
    }
    out.transformed = Network(net.name(), std::move(vars), std::move(automata), net.span());
    return out;
}

std::vector<std::size_t> original_var_indices(const Network& transformed)
{
    std::set<std::string> positional;
    if (transformed.positional())
        for (const auto& a : transformed.automata())
            positional.insert(positional_var_name(a.name));
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < transformed.vars().size(); ++i)
        if (!positional.count(transformed.vars()[i].name))
            keep.push_back(i);
    return keep;
}

State project(const Network& transformed, const State& s)
{
    State out;
    out.locs = s.locs;
    for (auto i : original_var_indices(transformed))
        out.vals.push_back(s.vals.at(i));
    return out;
}

std::string format_edit(const Network& net, const GuardEdit& e)
{
    (void)net;
    std::string s = e.automaton + " edge #" + std::to_string(e.edge) + " (case " + std::to_string(e.gamma_case)
        + "): " + to_string(e.old_guard) + "  =>  " + to_string(e.new_guard);
    if (e.gamma_case == 2)
        s += "  [disables the edge at its source]";
    return s;
}

} // namespace stateprio
