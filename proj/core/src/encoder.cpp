#include "stateprio/encoder.hpp"

#include "stateprio/error.hpp"

#include <algorithm>
#include <map>

namespace stateprio {

using smt::Term;

std::string step_name(const std::string& base, int step) { return base + "__" + std::to_string(step); }

UnfoldingFormula UnfoldingFormula::with(Term t) const
{
    UnfoldingFormula out = *this;
    out.extra.push_back(std::move(t));
    return out;
}

UnfoldingFormula UnfoldingFormula::with(std::vector<Term> ts) const
{
    UnfoldingFormula out = *this;
    for (auto& t : ts)
        out.extra.push_back(std::move(t));
    return out;
}

namespace {

using Composed = std::map<std::string, Expr>; // target -> expression over the pre-state

Composed compose(const UpdateVector& u)
{
    Composed env;
    for (const auto& a : u) {
        Expr e = a.expr.substitute([&](const std::string& n) -> std::optional<Expr> {
            if (auto it = env.find(n); it != env.end())
                return it->second;
            return std::nullopt;
        });
        env[a.target] = e;
    }
    return env;
}

} // namespace

Encoder::Encoder(const Network& net, int k)
    : net_(net)
    , k_(k)
{
    if (k < 1)
        throw EncodingError("unfolding bound must be at least 1, got " + std::to_string(k));
    auto diags = validate_network(net_);
    if (!diags.empty())
        throw EncodingError("network is not well formed: " + to_string(diags.front()));

    formula_.k = k;
    bool any_real = std::any_of(net_.vars().begin(), net_.vars().end(), [](const VarDecl& v) { return v.type == Type::Real; });
    formula_.logic = any_real ? "QF_LIRA" : "QF_LIA";

    // who writes what
    std::map<std::string, std::set<std::size_t>> writers;
    std::vector<std::vector<Composed>> composed(net_.size());
    for (std::size_t a = 0; a < net_.size(); ++a) {
        for (const auto& e : net_.automaton(a).edges) {
            composed[a].push_back(compose(e.updates));
            for (const auto& [t, _] : composed[a].back())
                writers[t].insert(a);
        }
    }
    for (const auto& [v, ws] : writers)
        if (ws.size() > 1)
            shared_written_.insert(v);
    writers_ = writers;

    // Broadcast updates run in ascending holder order. A variable touched by
    // more than one holder of a shared action is threaded through
    // intermediate copies, one per holder, so each holder reads what the
    // previous one wrote.
    std::map<std::string, std::map<std::size_t, std::set<std::string>>> action_writes;
    std::map<std::string, std::set<std::string>> chained;
    for (const auto& action : net_.actions()) {
        const auto& hs = net_.holders(action);
        std::map<std::size_t, std::set<std::string>> reads;
        for (auto h : hs) {
            const auto& edges = net_.automaton(h).edges;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                if (edges[e].action != action)
                    continue;
                for (const auto& [t, ex] : composed[h][e]) {
                    action_writes[action][h].insert(t);
                    ex.collect_vars(reads[h]);
                }
            }
        }
        for (auto x : hs)
            for (auto y : hs)
                if (x != y)
                    for (const auto& v : action_writes[action][x])
                        if (action_writes[action][y].count(v) || reads[y].count(v))
                            chained[action].insert(v);
    }

    // declarations
    for (int i = 0; i <= k; ++i) {
        for (const auto& action : net_.actions())
            formula_.decls.push_back({StepVar::Kind::Action, action, i, smt::Sort::Bool, {}});
        for (const auto& a : net_.automata())
            formula_.decls.push_back({StepVar::Kind::Automaton, a.name, i, smt::Sort::Int, {}});
        for (const auto& v : net_.vars())
            formula_.decls.push_back({StepVar::Kind::Variable, v.name, i, v.type, {}});
    }
    auto stage_suffix = [](const std::string& action, std::size_t j) {
        return "__" + action + "__" + std::to_string(j);
    };
    for (int i = 0; i < k; ++i)
        for (const auto& [action, vs] : chained)
            for (const auto& v : vs)
                for (std::size_t j = 1; j < net_.holders(action).size(); ++j)
                    formula_.decls.push_back(
                        {StepVar::Kind::Intermediate, v, i, *net_.var_type(v), stage_suffix(action, j)});
    // value of chained v before (j) / after (j+1) the j-th holder moves
    auto stage = [&](const std::string& v, const std::string& action, std::size_t j, int i) {
        if (j == 0)
            return var_at(v, i);
        if (j == net_.holders(action).size())
            return var_at(v, i + 1);
        return Term::symbol(step_name(v, i) + stage_suffix(action, j), *net_.var_type(v));
    };

    for (std::size_t a = 0; a < net_.size(); ++a) {
        const Automaton& aut = net_.automaton(a);
        std::string line = "; locations of " + aut.name + ":";
        for (std::size_t l = 0; l < aut.locations.size(); ++l)
            line += " " + aut.locations[l] + "=" + std::to_string(net_.location_code(a, l));
        formula_.notes.push_back(line);
    }

    // I
    std::vector<Term> init;
    for (std::size_t a = 0; a < net_.size(); ++a) {
        const Automaton& aut = net_.automaton(a);
        init.push_back(smt::mk_eq(automaton_at(aut.name, 0), location_value(aut.name, aut.initial)));
    }
    for (const auto& v : net_.vars())
        init.push_back(smt::mk_eq(var_at(v.name, 0), Term::constant(v.init)));
    formula_.init = smt::mk_and(std::move(init));

    // T
    for (int i = 0; i < k; ++i) {
        for (std::size_t a = 0; a < net_.size(); ++a) {
            const Automaton& aut = net_.automaton(a);
            std::vector<Term> options;
            for (std::size_t e = 0; e < aut.edges.size(); ++e) {
                const Edge& edge = aut.edges[e];
                std::vector<Term> c;
                c.push_back(smt::mk_eq(automaton_at(aut.name, i), location_value(aut.name, edge.source)));
                c.push_back(action_at(edge.action, i));
                for (const auto& other : net_.actions())
                    if (other != edge.action)
                        c.push_back(smt::mk_not(action_at(other, i)));
                if (!edge.guard.is_true())
                    c.push_back(translate(edge.guard, i));
                const auto& hs = net_.holders(edge.action);
                const std::size_t pos = static_cast<std::size_t>(std::find(hs.begin(), hs.end(), a) - hs.begin());
                const auto& chain = chained[edge.action];
                auto input = [&](const std::string& v) {
                    return chain.count(v) ? stage(v, edge.action, pos, i) : var_at(v, i);
                };
                const Composed& up = composed[a][e];
                for (const auto& [t, ex] : up) {
                    Term out = chain.count(t) ? stage(t, edge.action, pos + 1, i) : var_at(t, i + 1);
                    c.push_back(smt::mk_eq(out, translate(ex, input)));
                }
                for (const auto& v : chain)
                    if (!up.count(v))
                        c.push_back(smt::mk_eq(stage(v, edge.action, pos + 1, i), stage(v, edge.action, pos, i)));
                for (const auto& [v, _] : writers) {
                    if (up.count(v) || chain.count(v))
                        continue;
                    bool other_writes = false;
                    for (auto h : hs)
                        if (h != a && action_writes[edge.action][h].count(v))
                            other_writes = true;
                    if (!other_writes)
                        c.push_back(smt::mk_eq(var_at(v, i + 1), var_at(v, i)));
                }
                c.push_back(smt::mk_eq(automaton_at(aut.name, i + 1), location_value(aut.name, edge.target)));
                options.push_back(smt::mk_and(std::move(c)));
            }
            std::vector<Term> idle;
            idle.push_back(smt::mk_eq(automaton_at(aut.name, i + 1), automaton_at(aut.name, i)));
            for (const auto& action : aut.alphabet())
                idle.push_back(smt::mk_not(action_at(action, i)));
            for (const auto& [v, ws] : writers)
                if (ws.size() == 1 && *ws.begin() == a)
                    idle.push_back(smt::mk_eq(var_at(v, i + 1), var_at(v, i)));
            options.push_back(smt::mk_and(std::move(idle)));
            formula_.trans.push_back(smt::mk_or(std::move(options)));
        }
        std::vector<Term> keep;
        std::vector<Term> stutter;
        for (const auto& v : net_.vars()) {
            if (!writers.count(v.name))
                keep.push_back(smt::mk_eq(var_at(v.name, i + 1), var_at(v.name, i)));
            else if (shared_written_.count(v.name))
                stutter.push_back(smt::mk_eq(var_at(v.name, i + 1), var_at(v.name, i)));
        }
        if (!keep.empty())
            formula_.trans.push_back(smt::mk_and(std::move(keep)));
        if (!stutter.empty()) {
            std::vector<Term> fired;
            for (const auto& action : net_.actions())
                fired.push_back(action_at(action, i));
            fired.push_back(smt::mk_and(std::move(stutter)));
            formula_.trans.push_back(smt::mk_or(std::move(fired)));
        }
    }
    // nothing fires out of the last step
    std::vector<Term> last;
    for (const auto& action : net_.actions())
        last.push_back(smt::mk_not(action_at(action, k)));
    if (!last.empty())
        formula_.trans.push_back(smt::mk_and(std::move(last)));
}

const std::set<std::size_t>& Encoder::writers(const std::string& var) const
{
    static const std::set<std::size_t> none;
    auto it = writers_.find(var);
    return it == writers_.end() ? none : it->second;
}

Term Encoder::action_at(const std::string& action, int step) const
{
    if (!net_.has_action(action))
        throw EncodingError("unknown action '" + action + "'");
    return Term::symbol(step_name(action, step), smt::Sort::Bool);
}

Term Encoder::automaton_at(const std::string& automaton, int step) const
{
    if (!net_.automaton_index(automaton))
        throw EncodingError("unknown automaton '" + automaton + "'");
    return Term::symbol(step_name(automaton, step), smt::Sort::Int);
}

Term Encoder::var_at(const std::string& var, int step) const
{
    auto t = net_.var_type(var);
    if (!t)
        throw EncodingError("unknown variable '" + var + "'");
    return Term::symbol(step_name(var, step), *t);
}

Term Encoder::location_value(const std::string& automaton, const std::string& loc) const
{
    auto a = net_.automaton_index(automaton);
    if (!a)
        throw EncodingError("unknown automaton '" + automaton + "'");
    auto l = net_.automaton(*a).location_index(loc);
    if (!l)
        throw EncodingError("automaton '" + automaton + "' has no location '" + loc + "'");
    return Term::constant(Value::integer(net_.location_code(*a, *l)));
}

Term Encoder::translate(const Expr& e, int step) const
{
    return translate(e, [&](const std::string& v) { return var_at(v, step); });
}

Term Encoder::translate(const Expr& e, const std::function<Term(const std::string&)>& var) const
{
    switch (e.op()) {
    case Op::Literal: return Term::constant(e.value());
    case Op::Var: return var(e.name());
    case Op::Neg: return smt::mk_neg(translate(e.arg(0), var));
    case Op::Not: return smt::mk_not(translate(e.arg(0), var));
    case Op::Add: return smt::mk_arith("+", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Sub: return smt::mk_arith("-", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Mul:
        if (!is_linear(e))
            throw EncodingError("non-linear expression '" + to_string(e) + "'");
        return smt::mk_arith("*", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Lt: return smt::mk_cmp("<", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Le: return smt::mk_cmp("<=", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Ge: return smt::mk_cmp(">=", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Gt: return smt::mk_cmp(">", translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Eq: return smt::mk_eq(translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::Ne: return smt::mk_distinct(translate(e.arg(0), var), translate(e.arg(1), var));
    case Op::And: return smt::mk_and({translate(e.arg(0), var), translate(e.arg(1), var)});
    case Op::Or: return smt::mk_or({translate(e.arg(0), var), translate(e.arg(1), var)});
    }
    throw EncodingError("unsupported expression");
}

void Encoder::check_step(int j, int lo, int hi, const char* what) const
{
    if (j < lo || j > hi)
        throw EncodingError(std::string(what) + ": step " + std::to_string(j) + " outside [" + std::to_string(lo) + ", "
            + std::to_string(hi) + "] for bound " + std::to_string(k_));
}

Term Encoder::snapshot_match(int step, const Configuration& c) const
{
    if (c.empty_snapshot())
        throw EncodingError("configuration constrains nothing");
    std::vector<Term> out;
    for (const auto& [a, l] : c.loc)
        out.push_back(smt::mk_eq(automaton_at(a, step), location_value(a, l)));
    for (const auto& [v, val] : c.var)
        out.push_back(smt::mk_eq(var_at(v, step), Term::constant(val)));
    for (const auto& [a, ls] : c.excluded)
        for (const auto& l : ls)
            out.push_back(smt::mk_distinct(automaton_at(a, step), location_value(a, l)));
    return smt::mk_and(std::move(out));
}

Term Encoder::snapshot_differs(int step, const Configuration& c) const
{
    if (c.empty_snapshot())
        throw EncodingError("configuration constrains nothing");
    std::vector<Term> out;
    for (const auto& [a, l] : c.loc)
        out.push_back(smt::mk_distinct(automaton_at(a, step), location_value(a, l)));
    for (const auto& [v, val] : c.var)
        out.push_back(smt::mk_distinct(var_at(v, step), Term::constant(val)));
    for (const auto& [a, ls] : c.excluded)
        for (const auto& l : ls)
            out.push_back(smt::mk_eq(automaton_at(a, step), location_value(a, l)));
    return smt::mk_or(std::move(out));
}

Term Encoder::progress(int j) const
{
    check_step(j, 0, k_ - 1, "progress");
    std::vector<Term> steps;
    for (int i = 0; i <= j; ++i) {
        std::vector<Term> moved;
        for (const auto& a : net_.automata())
            moved.push_back(smt::mk_distinct(automaton_at(a.name, i), automaton_at(a.name, i + 1)));
        for (const auto& v : net_.vars())
            moved.push_back(smt::mk_distinct(var_at(v.name, i), var_at(v.name, i + 1)));
        steps.push_back(smt::mk_or(std::move(moved)));
    }
    return smt::mk_and(std::move(steps));
}

Term Encoder::query(int j, const Configuration& c) const
{
    check_step(j, 0, k_ - 1, "query");
    return snapshot_match(j + 1, c);
}

Term Encoder::avoid(int j, const Configuration& c) const
{
    check_step(j, 0, k_ - 1, "avoid");
    std::vector<Term> out;
    for (int i = 0; i <= j; ++i)
        out.push_back(snapshot_differs(i, c));
    return smt::mk_and(std::move(out));
}

Term Encoder::preerror(int j, const Configuration& c) const
{
    check_step(j, 0, k_, "preerror");
    return snapshot_match(j, c);
}

Term Encoder::error(int j, const Configuration& c) const
{
    check_step(j, 0, k_ - 1, "error");
    return snapshot_differs(j + 1, c);
}

UnfoldingFormula encode_unfolding(const Network& net, int k) { return Encoder(net, k).unfolding(); }

std::string emit_script(const UnfoldingFormula& f)
{
    std::string out;
    out += "; unfolding k=" + std::to_string(f.k) + "\n";
    for (const auto& n : f.notes)
        out += n + "\n";
    out += "(set-option :produce-models true)\n";
    out += "(set-logic " + f.logic + ")\n";
    for (const auto& d : f.decls) {
        out += "(declare-const " + d.name() + " ";
        out += smt::sort_name(d.sort);
        out += ")\n";
    }
    auto assert_term = [&](const Term& t) {
        out += "(assert ";
        t.write(out);
        out += ")\n";
    };
    assert_term(f.init);
    for (const auto& t : f.trans)
        assert_term(t);
    for (const auto& t : f.extra)
        assert_term(t);
    out += "(check-sat)\n(get-model)\n";
    return out;
}

} // namespace stateprio
