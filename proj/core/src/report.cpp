#include "stateprio/report.hpp"

#include "stateprio/error.hpp"

#include <json.hpp>

#include <sstream>

namespace stateprio {

using nlohmann::ordered_json;

namespace {

ordered_json value_json(const Value& v)
{
    switch (v.type()) {
    case Type::Bool: return v.as_bool();
    case Type::Int: return v.as_int();
    case Type::Real: return v.as_rational().str();
    }
    return nullptr;
}

Value value_from_json(const ordered_json& j, Type t, const std::string& what)
{
    switch (t) {
    case Type::Bool:
        if (!j.is_boolean())
            throw Error(what + ": expected a boolean");
        return Value::boolean(j.get<bool>());
    case Type::Int:
        if (!j.is_number_integer())
            throw Error(what + ": expected an integer");
        return Value::integer(j.get<std::int64_t>());
    case Type::Real:
        if (j.is_number_integer())
            return Value::real(Rational(j.get<std::int64_t>()));
        if (!j.is_string())
            throw Error(what + ": expected a rational string");
        return Value::real(Rational::parse(j.get<std::string>()));
    }
    throw Error(what + ": bad type");
}

ordered_json config_json(const Configuration& c)
{
    ordered_json j;
    j["loc"] = ordered_json::object();
    for (const auto& [a, l] : c.loc)
        j["loc"][a] = l;
    j["var"] = ordered_json::object();
    for (const auto& [v, val] : c.var)
        j["var"][v] = value_json(val);
    j["step"] = c.step;
    return j;
}

ordered_json stateful_json(const StatefulPriority& sp)
{
    ordered_json j;
    j["pre"] = config_json(sp.pre);
    j["blockee"] = sp.prio.blockee;
    j["blocker"] = sp.prio.blocker;
    return j;
}

void only_keys(const ordered_json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    if (!j.is_object())
        throw Error(where + ": expected an object");
    for (const auto& [k, _] : j.items()) {
        bool ok = false;
        for (const char* key : keys)
            ok = ok || k == key;
        if (!ok)
            throw Error(where + ": unknown field '" + k + "'");
    }
    for (const char* key : keys)
        if (!j.contains(key))
            throw Error(where + ": missing field '" + std::string(key) + "'");
}

} // namespace

std::string priorities_json(const Network& net, const std::vector<StatefulPriority>& sp)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["network"] = net.name();
    j["stateful"] = ordered_json::array();
    for (const auto& p : sp)
        j["stateful"].push_back(stateful_json(p));
    return j.dump(2) + "\n";
}

std::vector<StatefulPriority> read_priorities_json(const std::string& text, const Network& net)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw Error(std::string("priorities file is not valid JSON: ") + e.what());
    }
    only_keys(j, {"schema_version", "network", "stateful"}, "priorities");
    if (j["schema_version"] != kSchemaVersion)
        throw Error("priorities: unsupported schema_version " + j["schema_version"].dump());
    if (!j["network"].is_string() || j["network"].get<std::string>() != net.name())
        throw Error("priorities were synthesized for network " + j["network"].dump() + ", not '" + net.name() + "'");
    if (!j["stateful"].is_array())
        throw Error("priorities: 'stateful' must be an array");
    std::vector<StatefulPriority> out;
    std::size_t idx = 0;
    for (const auto& e : j["stateful"]) {
        std::string where = "priorities: entry " + std::to_string(idx++);
        only_keys(e, {"pre", "blockee", "blocker"}, where);
        only_keys(e["pre"], {"loc", "var", "step"}, where + ".pre");
        StatefulPriority sp;
        if (!e["blockee"].is_string() || !e["blocker"].is_string())
            throw Error(where + ": blockee and blocker must be strings");
        sp.prio = {e["blockee"].get<std::string>(), e["blocker"].get<std::string>()};
        for (const auto* act : {&sp.prio.blockee, &sp.prio.blocker})
            if (!net.has_action(*act))
                throw Error(where + ": unknown action '" + *act + "'");
        const auto& pre = e["pre"];
        if (!pre["step"].is_number_integer() || pre["step"].get<int>() < 0)
            throw Error(where + ": step must be a non-negative integer");
        sp.pre.step = pre["step"].get<int>();
        if (!pre["loc"].is_object() || !pre["var"].is_object())
            throw Error(where + ": loc and var must be objects");
        for (const auto& [a, l] : pre["loc"].items()) {
            auto ai = net.automaton_index(a);
            if (!ai)
                throw Error(where + ": unknown automaton '" + a + "'");
            if (!l.is_string() || !net.automaton(*ai).location_index(l.get<std::string>()))
                throw Error(where + ": unknown location " + l.dump() + " of '" + a + "'");
            sp.pre.loc[a] = l.get<std::string>();
        }
        for (const auto& [v, val] : pre["var"].items()) {
            auto t = net.var_type(v);
            if (!t)
                throw Error(where + ": unknown variable '" + v + "'");
            sp.pre.var[v] = value_from_json(val, *t, where + "." + v);
        }
        out.push_back(std::move(sp));
    }
    return out;
}

std::string report_json(const Network& net, const SynthesisReport& r, const TransformOutcome* t)
{
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["network"] = net.name();
    j["query"] = r.query;
    j["max"] = r.max;
    j["outcome"] = std::string(to_string(r.outcome));
    j["stateful"] = ordered_json::array();
    for (const auto& p : r.stateful)
        j["stateful"].push_back(stateful_json(p));
    j["errors"] = ordered_json::array();
    for (std::size_t i = 1; i < r.errors.size(); ++i)
        j["errors"].push_back(config_json(r.errors[i]));
    j["preerrors"] = ordered_json::array();
    for (const auto& c : r.preerrors)
        j["preerrors"].push_back(config_json(c));
    if (r.circular)
        j["circular"] = stateful_json(*r.circular);
    ordered_json s;
    s["solver_calls"] = r.stats.solver_calls;
    s["sat"] = r.stats.sat;
    s["unsat"] = r.stats.unsat;
    s["reach_queries"] = r.stats.reach_queries;
    s["prio_queries"] = r.stats.prio_queries;
    s["max_recursion"] = r.stats.max_recursion;
    s["seconds"] = r.stats.seconds;
    j["stats"] = s;
    if (t) {
        j["guard_edits"] = ordered_json::array();
        for (const auto& e : t->edits) {
            ordered_json g;
            g["automaton"] = e.automaton;
            g["edge"] = e.edge;
            g["case"] = e.gamma_case;
            g["old_guard"] = to_string(e.old_guard);
            g["new_guard"] = to_string(e.new_guard);
            j["guard_edits"].push_back(g);
        }
    }
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

std::string report_text(const Network& net, const SynthesisReport& r, const TransformOutcome* t)
{
    std::ostringstream out;
    out << "network " << net.name() << ", query " << r.query << ", max " << r.max << "\n";
    out << "outcome: " << to_string(r.outcome) << "\n";
    switch (r.outcome) {
    case Outcome::ErrorUnreachable: out << "error unreachable up to bound " << r.max << "\n"; break;
    case Outcome::PrioritiesFound: out << r.stateful.size() << " stateful priorities\n"; break;
    default: break;
    }
    for (const auto& p : r.stateful)
        out << "  " << format_snapshot(p.pre) << " -> (" << p.prio.blockee << ", " << p.prio.blocker << ")\n";
    if (r.errors.size() > 1) {
        out << "additional errors (preErrors without priorities):\n";
        for (std::size_t i = 1; i < r.errors.size(); ++i)
            out << "  " << format_snapshot(r.errors[i]) << "\n";
    }
    if (!r.preerrors.empty()) {
        out << "preErrors found:\n";
        for (const auto& c : r.preerrors)
            out << "  step " << c.step << ": " << format_snapshot(c) << "\n";
    }
    if (t && !t->edits.empty()) {
        out << "guard edits:\n";
        for (const auto& e : t->edits)
            out << "  " << format_edit(net, e) << "\n";
    }
    for (const auto& n : r.notes)
        out << "note: " << n << "\n";
    out << "solver calls " << r.stats.solver_calls << " (sat " << r.stats.sat << ", unsat " << r.stats.unsat
        << "), recursion depth " << r.stats.max_recursion << ", " << r.stats.seconds << " s\n";
    return out.str();
}

} // namespace stateprio
