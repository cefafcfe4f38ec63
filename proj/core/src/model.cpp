#include "stateprio/model.hpp"

#include "stateprio/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace stateprio {

std::string to_string(const SourceSpan& s)
{
    std::string file = s.file.empty() ? "<input>" : s.file;
    if (!s.known())
        return file;
    return file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

std::string to_string(const Diagnostic& d) { return to_string(d.span) + ": " + d.message; }

std::optional<std::size_t> Automaton::location_index(const std::string& loc) const
{
    auto it = std::find(locations.begin(), locations.end(), loc);
    if (it == locations.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - locations.begin());
}

std::vector<std::string> Automaton::alphabet() const
{
    std::set<std::string> acts;
    for (const auto& e : edges)
        acts.insert(e.action);
    return {acts.begin(), acts.end()};
}

bool Automaton::has_action(const std::string& a) const
{
    return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return e.action == a; });
}

std::string positional_var_name(const std::string& automaton) { return "p_" + automaton; }

namespace {

std::optional<std::int64_t> numeral(const std::string& s)
{
    if (s.empty() || (s.size() > 1 && s[0] == '0'))
        return std::nullopt;
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        return std::nullopt;
    return v;
}

} // namespace

Network::Network(std::string name, std::vector<VarDecl> vars, std::vector<Automaton> automata, SourceSpan span)
    : name_(std::move(name))
    , vars_(std::move(vars))
    , automata_(std::move(automata))
    , span_(std::move(span))
{
    for (std::size_t i = 0; i < automata_.size(); ++i)
        automaton_ix_.emplace(automata_[i].name, i);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        var_ix_.emplace(vars_[i].name, i);

    std::set<std::string> acts;
    for (std::size_t i = 0; i < automata_.size(); ++i) {
        for (const auto& a : automata_[i].alphabet()) {
            acts.insert(a);
            holders_[a].push_back(i);
        }
    }
    actions_.assign(acts.begin(), acts.end());

    for (const auto& a : automata_) {
        std::vector<std::int64_t> codes;
        bool numeric = !a.locations.empty();
        std::set<std::int64_t> seen;
        for (const auto& l : a.locations) {
            auto n = numeral(l);
            if (!n || !seen.insert(*n).second) {
                numeric = false;
                break;
            }
            codes.push_back(*n);
        }
        if (!numeric) {
            codes.clear();
            for (std::size_t i = 0; i < a.locations.size(); ++i)
                codes.push_back(static_cast<std::int64_t>(i));
        }
        codes_.push_back(std::move(codes));
        numeric_codes_.push_back(numeric);
    }

    positional_ = !automata_.empty();
    for (std::size_t i = 0; i < automata_.size() && positional_; ++i) {
        const auto& a = automata_[i];
        auto vi = var_index(positional_var_name(a.name));
        auto init = a.location_index(a.initial);
        if (!vi || vars_[*vi].type != Type::Int || !init
            || vars_[*vi].init != Value::integer(location_code(i, *init))) {
            positional_ = false;
            break;
        }
        for (const auto& e : a.edges) {
            auto t = a.location_index(e.target);
            if (!t || e.updates.empty()) {
                positional_ = false;
                break;
            }
            const auto& last = e.updates.back();
            if (last.target != positional_var_name(a.name) || !last.expr.is_literal()
                || last.expr.value() != Value::integer(location_code(i, *t))) {
                positional_ = false;
                break;
            }
        }
    }
}

std::optional<std::size_t> Network::automaton_index(const std::string& name) const
{
    auto it = automaton_ix_.find(name);
    if (it == automaton_ix_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Network::var_index(const std::string& name) const
{
    auto it = var_ix_.find(name);
    if (it == var_ix_.end())
        return std::nullopt;
    return it->second;
}

std::optional<Type> Network::var_type(const std::string& name) const
{
    if (auto i = var_index(name))
        return vars_[*i].type;
    return std::nullopt;
}

TypeLookup Network::type_lookup() const
{
    return [this](const std::string& n) { return var_type(n); };
}

bool Network::has_action(const std::string& a) const { return holders_.count(a) != 0; }

const std::vector<std::size_t>& Network::holders(const std::string& action) const
{
    static const std::vector<std::size_t> none;
    auto it = holders_.find(action);
    return it == holders_.end() ? none : it->second;
}

std::int64_t Network::location_code(std::size_t a, std::size_t loc_index) const
{
    return codes_.at(a).at(loc_index);
}

std::optional<std::size_t> Network::location_from_code(std::size_t a, std::int64_t code) const
{
    const auto& c = codes_.at(a);
    auto it = std::find(c.begin(), c.end(), code);
    if (it == c.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - c.begin());
}

namespace {

const std::set<std::string>& keywords()
{
    static const std::set<std::string> kw = {"network", "int", "real", "bool", "automaton", "init", "locations",
        "edge", "on", "when", "do", "true", "false", "EF"};
    return kw;
}

bool is_identifier(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_location_name(const std::string& s)
{
    return !s.empty()
        && std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool assignable(Type target, Type value) { return target == value || (target == Type::Real && value == Type::Int); }

class Validator {
public:
    explicit Validator(const Network& net) : net_(net) {}

    std::vector<Diagnostic> run()
    {
        if (net_.automata().empty())
            add(net_.span(), "network '" + net_.name() + "' must contain at least one automaton");
        check_name(net_.name(), net_.span(), "network");
        check_namespaces();
        for (const auto& v : net_.vars())
            check_var(v);
        for (const auto& a : net_.automata())
            check_automaton(a);
        return std::move(diags_);
    }

private:
    void add(const SourceSpan& span, std::string msg) { diags_.push_back({span, std::move(msg)}); }

    void check_name(const std::string& name, const SourceSpan& span, const char* what)
    {
        if (!is_identifier(name))
            add(span, std::string("invalid ") + what + " identifier '" + name + "'");
        else if (keywords().count(name))
            add(span, std::string(what) + " identifier '" + name + "' is a reserved word");
        else if (name.find("__") != std::string::npos)
            add(span, std::string(what) + " identifier '" + name + "' must not contain '__'");
    }

    void check_namespaces()
    {
        std::map<std::string, std::string> owner; // name -> kind
        auto claim = [&](const std::string& name, const std::string& kind, const SourceSpan& span) {
            auto [it, fresh] = owner.emplace(name, kind);
            if (!fresh) {
                if (it->second == kind)
                    add(span, "duplicate " + kind + " '" + name + "'");
                else
                    add(span, kind + " '" + name + "' clashes with " + it->second + " of the same name");
            }
        };
        for (const auto& a : net_.automata()) {
            check_name(a.name, a.span, "automaton");
            claim(a.name, "automaton", a.span);
        }
        for (const auto& v : net_.vars()) {
            check_name(v.name, v.span, "variable");
            claim(v.name, "variable", v.span);
        }
        std::set<std::string> seen;
        for (const auto& a : net_.automata()) {
            for (const auto& e : a.edges) {
                if (!seen.insert(e.action).second)
                    continue;
                check_name(e.action, e.span, "action");
                claim(e.action, "action", e.span);
            }
        }
    }

    void check_var(const VarDecl& v)
    {
        if (!assignable(v.type, v.init.type()))
            add(v.span, "initial value " + v.init.str() + " of '" + v.name + "' is not of type "
                    + std::string(to_string(v.type)));
    }

    void check_expr(const Expr& e, const SourceSpan& span, const std::string& where, std::optional<Type> expect)
    {
        try {
            Type t = type_of(e, net_.type_lookup());
            if (expect && !assignable(*expect, t))
                add(span, where + " has type " + std::string(to_string(t)) + ", expected "
                        + std::string(to_string(*expect)));
        } catch (const EvalError& err) {
            add(span, where + ": " + err.what());
            return;
        }
        if (!is_linear(e))
            add(span, where + " is not linear (multiplication needs a constant operand)");
    }

    void check_automaton(const Automaton& a)
    {
        if (a.locations.empty())
            add(a.span, "automaton '" + a.name + "' declares no locations");
        std::set<std::string> locs;
        for (const auto& l : a.locations) {
            if (!is_location_name(l) || l.find("__") != std::string::npos)
                add(a.span, "invalid location identifier '" + l + "' in automaton '" + a.name + "'");
            if (!locs.insert(l).second)
                add(a.span, "duplicate location '" + l + "' in automaton '" + a.name + "'");
        }
        if (!locs.count(a.initial))
            add(a.span, "initial location '" + a.initial + "' of automaton '" + a.name + "' is not declared");
        for (const auto& e : a.edges) {
            if (!locs.count(e.source))
                add(e.span, "edge source '" + e.source + "' is not a location of '" + a.name + "'");
            if (!locs.count(e.target))
                add(e.span, "edge target '" + e.target + "' is not a location of '" + a.name + "'");
            check_expr(e.guard, e.span, "guard '" + to_string(e.guard) + "'", Type::Bool);
            for (const auto& u : e.updates) {
                auto t = net_.var_type(u.target);
                if (!t) {
                    add(e.span, "assignment to undeclared variable '" + u.target + "'");
                    continue;
                }
                check_expr(u.expr, e.span, "assignment '" + u.target + " := " + to_string(u.expr) + "'", *t);
            }
        }
    }

    const Network& net_;
    std::vector<Diagnostic> diags_;
};

} // namespace

std::vector<Diagnostic> validate_network(const Network& net) { return Validator(net).run(); }

ValueLookup value_lookup(const Network& net, const Valuation& v)
{
    return [&net, &v](const std::string& n) -> std::optional<Value> {
        auto i = net.var_index(n);
        if (!i || *i >= v.size())
            return std::nullopt;
        return v[*i];
    };
}

Value eval_expr(const Network& net, const Expr& e, const Valuation& v) { return eval(e, value_lookup(net, v)); }

Valuation apply_updates(const Network& net, const UpdateVector& u, Valuation v)
{
    for (const auto& a : u) {
        auto i = net.var_index(a.target);
        if (!i)
            throw EvalError("assignment to undeclared variable '" + a.target + "'");
        Value val = eval(a.expr, value_lookup(net, v));
        Type target = net.vars()[*i].type;
        if (val.type() != target) {
            if (target == Type::Real && val.type() == Type::Int)
                val = Value::real(val.as_rational());
            else
                throw EvalError("type mismatch assigning " + val.str() + " to " + std::string(to_string(target))
                    + " variable '" + a.target + "'");
        }
        v[*i] = std::move(val);
    }
    return v;
}

std::size_t StateHash::operator()(const State& s) const
{
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto l : s.locs)
        h = (h ^ l) * 0x100000001b3ull;
    for (const auto& v : s.vals)
        h = (h ^ v.hash()) * 0x100000001b3ull;
    return h;
}

namespace {

std::string format_vals(const Network& net, const State& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.vals.size(); ++i) {
        if (i)
            out += ", ";
        out += net.vars()[i].name + "=" + s.vals[i].str();
    }
    return out + "}";
}

} // namespace

std::string format_state(const Network& net, const State& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.locs.size(); ++i) {
        if (i)
            out += ", ";
        out += net.automaton(i).locations.at(s.locs[i]);
    }
    return out + ") " + format_vals(net, s);
}

std::string format_state_qualified(const Network& net, const State& s)
{
    std::string out = "(";
    for (std::size_t i = 0; i < s.locs.size(); ++i) {
        if (i)
            out += ", ";
        out += net.automaton(i).name + "." + net.automaton(i).locations.at(s.locs[i]);
    }
    return out + ") " + format_vals(net, s);
}

std::string to_string(const StateFormula& f)
{
    std::string out = "EF (";
    for (std::size_t i = 0; i < f.literals.size(); ++i) {
        if (i)
            out += " && ";
        const auto& l = f.literals[i];
        out += (l.negated ? "!" : "") + l.automaton + "." + l.location;
    }
    return out + ")";
}

bool state_satisfies(const Network& net, const State& s, const StateFormula& f)
{
    for (const auto& lit : f.literals) {
        auto a = net.automaton_index(lit.automaton);
        if (!a)
            throw Error("unknown automaton '" + lit.automaton + "' in state formula");
        auto l = net.automaton(*a).location_index(lit.location);
        if (!l)
            throw Error("unknown location '" + lit.automaton + "." + lit.location + "' in state formula");
        bool at = s.locs.at(*a) == *l;
        if (at == lit.negated)
            return false;
    }
    return true;
}

bool Configuration::same_snapshot(const Configuration& o) const
{
    return loc == o.loc && var == o.var && excluded == o.excluded;
}

bool snapshot_less(const Configuration& a, const Configuration& b)
{
    if (a.loc != b.loc)
        return a.loc < b.loc;
    if (a.var != b.var)
        return std::lexicographical_compare(a.var.begin(), a.var.end(), b.var.begin(), b.var.end(),
            [](const auto& x, const auto& y) {
                if (x.first != y.first)
                    return x.first < y.first;
                return x.second < y.second;
            });
    return a.excluded < b.excluded;
}

std::optional<std::string> Configuration::true_action() const
{
    std::optional<std::string> found;
    for (const auto& [name, on] : act) {
        if (!on)
            continue;
        if (found)
            return std::nullopt;
        found = name;
    }
    return found;
}

std::string format_snapshot(const Configuration& c)
{
    std::ostringstream os;
    os << "<";
    bool first = true;
    for (const auto& [a, l] : c.loc) {
        os << (first ? "" : ", ") << a << "=" << l;
        first = false;
    }
    for (const auto& [a, ls] : c.excluded)
        for (const auto& l : ls) {
            os << (first ? "" : ", ") << a << "!=" << l;
            first = false;
        }
    for (const auto& [v, val] : c.var) {
        os << (first ? "" : ", ") << v << "=" << val.str();
        first = false;
    }
    os << ">";
    return os.str();
}

bool config_matches(const Network& net, const State& s, const Configuration& c)
{
    for (const auto& [a, l] : c.loc) {
        auto ai = net.automaton_index(a);
        if (!ai || net.automaton(*ai).locations.at(s.locs.at(*ai)) != l)
            return false;
    }
    for (const auto& [a, ls] : c.excluded) {
        auto ai = net.automaton_index(a);
        if (!ai)
            return false;
        if (ls.count(net.automaton(*ai).locations.at(s.locs.at(*ai))))
            return false;
    }
    for (const auto& [v, val] : c.var) {
        auto vi = net.var_index(v);
        if (!vi || !(s.vals.at(*vi) == val))
            return false;
    }
    return true;
}

Configuration state_to_config(const Network& net, const State& s, int step)
{
    Configuration c;
    for (std::size_t i = 0; i < net.size(); ++i)
        c.loc[net.automaton(i).name] = net.automaton(i).locations.at(s.locs.at(i));
    for (std::size_t i = 0; i < net.vars().size(); ++i)
        c.var[net.vars()[i].name] = s.vals.at(i);
    c.step = step;
    return c;
}

State config_to_state(const Network& net, const Configuration& c)
{
    State s;
    for (const auto& a : net.automata()) {
        auto it = c.loc.find(a.name);
        if (it == c.loc.end())
            throw Error("configuration does not place automaton '" + a.name + "'");
        auto l = a.location_index(it->second);
        if (!l)
            throw Error("configuration references unknown location '" + a.name + "." + it->second + "'");
        s.locs.push_back(*l);
    }
    for (const auto& v : net.vars()) {
        auto it = c.var.find(v.name);
        if (it == c.var.end())
            throw Error("configuration does not assign variable '" + v.name + "'");
        s.vals.push_back(it->second);
    }
    if (c.loc.size() != net.size() || c.var.size() != net.vars().size())
        throw Error("configuration mentions names unknown to network '" + net.name() + "'");
    return s;
}

Configuration formula_to_config(const Network& net, const StateFormula& f)
{
    Configuration c;
    for (const auto& lit : f.literals) {
        auto a = net.automaton_index(lit.automaton);
        if (!a || !net.automaton(*a).location_index(lit.location))
            throw Error("unknown location '" + lit.automaton + "." + lit.location + "' in state formula");
        if (lit.negated) {
            c.excluded[lit.automaton].insert(lit.location);
        } else {
            auto [it, fresh] = c.loc.emplace(lit.automaton, lit.location);
            if (!fresh && it->second != lit.location)
                throw Error("state formula places '" + lit.automaton + "' at two locations");
        }
    }
    return c;
}

bool same_stateful(const StatefulPriority& a, const StatefulPriority& b)
{
    return a.prio == b.prio && a.pre.same_snapshot(b.pre);
}

bool stateful_less(const StatefulPriority& a, const StatefulPriority& b)
{
    if (snapshot_less(a.pre, b.pre))
        return true;
    if (snapshot_less(b.pre, a.pre))
        return false;
    return a.prio < b.prio;
}

} // namespace stateprio
