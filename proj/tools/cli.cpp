#include "cli.hpp"

#include "stateprio/stateprio.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

namespace stateprio::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string model;
    std::string query;
    int max = 15;
    std::string solver;
    std::vector<std::string> solver_args;
    double timeout = 60;
    std::string bounds;
    std::string out;
    std::uint64_t seed = 1;
    std::string keep_scripts;
};

void add_common(CLI::App* cmd, Common& c, bool needs_query)
{
    cmd->add_option("--model", c.model, "network file (.net)")->required()->check(CLI::ExistingFile);
    auto* q = cmd->add_option("--query", c.query, "error query file (.q)")->check(CLI::ExistingFile);
    if (needs_query)
        q->required();
    cmd->add_option("--max", c.max, "unfolding bound")->check(CLI::PositiveNumber);
    cmd->add_option("--solver", c.solver, "SMT solver binary (default: $STATEPRIO_SOLVER or z3)");
    cmd->add_option("--solver-arg", c.solver_args, "extra solver argument (repeatable)")->allow_extra_args(false);
    cmd->add_option("--timeout", c.timeout, "per-call solver timeout in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--bounds", c.bounds, "numeric domain lo:hi for explicit exploration");
    cmd->add_option("--out", c.out, "output directory or file");
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--keep-scripts", c.keep_scripts, "dump every solver script into this directory");
}

SolverConfig solver_config(const Common& c)
{
    SolverConfig s = SolverConfig::from_env();
    if (!c.solver.empty())
        s.path = c.solver;
    s.args = c.solver_args;
    s.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(c.timeout * 1000));
    if (!c.keep_scripts.empty())
        s.keep_scripts = c.keep_scripts;
    return s;
}

DomainBounds domain_bounds(const std::string& spec)
{
    if (spec.empty())
        return {};
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("--bounds expects lo:hi, got '" + spec + "'");
    DomainBounds b;
    b.default_lo = Rational::parse(spec.substr(0, colon));
    b.default_hi = Rational::parse(spec.substr(colon + 1));
    if (b.default_hi < b.default_lo)
        throw Error("--bounds: lo exceeds hi");
    return b;
}

void write_file(const fs::path& p, const std::string& text)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw Error("cannot write " + p.string());
    f << text;
}

int cmd_synth(const Common& c, std::ostream& out)
{
    Network net = parse_network(read_file(c.model), c.model);
    StateFormula f = parse_query(read_file(c.query), net, c.query);
    SynthesisOptions opts;
    opts.max = c.max;
    opts.solver = solver_config(c);
    SynthesisReport r = synthesize(net, f, opts);

    std::optional<TransformOutcome> t;
    if (r.outcome == Outcome::PrioritiesFound)
        t = transform_network(net, r.stateful);
    if (!c.bounds.empty()) {
        auto bound = reachability_bound(net, r, domain_bounds(c.bounds));
        r.notes.push_back(bound ? "reachable-state bound for the transformed network: " + std::to_string(*bound)
                                : std::string("reachable-state bound: unknown (domain-bounded)"));
    }

    fs::path dir = c.out.empty() ? fs::path("out") : fs::path(c.out);
    std::string text = report_text(net, r, t ? &*t : nullptr);
    write_file(dir / "report.txt", text);
    write_file(dir / "report.json", report_json(net, r, t ? &*t : nullptr));
    write_file(dir / "priorities.json", priorities_json(net, r.stateful));
    if (t)
        write_file(dir / (net.name() + ".rho.net"), print_network(t->transformed));
    out << text;
    out << "wrote " << dir.string() << "\n";
    switch (r.outcome) {
    case Outcome::PrioritiesFound:
    case Outcome::ErrorUnreachable: return kOk;
    default: return kNegative;
    }
}

// Steps 0..depth of a model, with idle steps dropped.
std::vector<std::string> witness(const Network& net, const SolverModel& m, int depth)
{
    std::vector<std::string> lines;
    Configuration c0 = create_config(m, 0, net);
    lines.push_back(format_trace_line(net, 0, "", config_to_state(net, c0)));
    int shown = 0;
    for (int i = 0; i < depth; ++i) {
        auto act = create_config(m, i, net, true).true_action();
        if (!act)
            continue;
        Configuration next = create_config(m, i + 1, net);
        lines.push_back(format_trace_line(net, ++shown, *act, config_to_state(net, next)));
    }
    return lines;
}

int cmd_check(const Common& c, std::ostream& out)
{
    Network net = parse_network(read_file(c.model), c.model);
    StateFormula f = parse_query(read_file(c.query), net, c.query);
    Configuration err = formula_to_config(net, f);
    Encoder enc(net, c.max);
    SolverConfig sc = solver_config(c);
    for (int d = 0; d <= c.max; ++d) {
        SolverVerdict v = solve(emit_script(enc.unfolding().with(enc.preerror(d, err))), sc);
        if (v.status == SolverStatus::Unsat) {
            out << "depth " << d << ": unsat\n";
            continue;
        }
        if (v.status != SolverStatus::Sat)
            throw SolverError("solver returned " + std::string(to_string(v.status)) + " at depth " + std::to_string(d)
                + (v.message.empty() ? "" : ": " + v.message));
        out << "depth " << d << ": sat\n";
        out << "reachable at depth " << d << "\n";
        for (const auto& line : witness(net, *v.model, d))
            out << line << "\n";
        return kNegative;
    }
    out << "unreachable up to depth " << c.max << "\n";
    return kOk;
}

int cmd_transform(const Common& c, const std::string& priorities, std::ostream& out)
{
    Network net = parse_network(read_file(c.model), c.model);
    auto sp = read_priorities_json(read_file(priorities), net);
    TransformOutcome t = transform_network(net, sp);
    std::string text = print_network(t.transformed);
    if (c.out.empty()) {
        out << text;
    } else {
        write_file(c.out, text);
        out << "wrote " << c.out << "\n";
    }
    for (const auto& e : t.edits)
        out << "// " << format_edit(net, e) << "\n";
    return kOk;
}

int cmd_simulate(const Common& c, int depth, const std::string& mode, int runs, std::ostream& out)
{
    Network net = parse_network(read_file(c.model), c.model);
    std::optional<StateFormula> f;
    if (!c.query.empty())
        f = parse_query(read_file(c.query), net, c.query);
    DomainBounds bounds = domain_bounds(c.bounds);
    auto is_error = [&](const State& s) { return f && state_satisfies(net, s, *f); };

    if (mode == "exhaustive") {
        ReachResult r = bfs_reach(net, depth, bounds);
        std::size_t deadlocks = 0;
        std::size_t errors = 0;
        std::optional<std::size_t> first_error;
        for (std::size_t i = 0; i < r.states.size(); ++i) {
            const State& s = r.states[i];
            bool dl = is_deadlock(net, s);
            bool er = is_error(s);
            deadlocks += dl;
            errors += er;
            if (er && !first_error)
                first_error = i;
            if (dl || er)
                out << (dl ? "deadlock" : "") << (dl && er ? ", " : "") << (er ? "error" : "") << " at depth "
                    << r.depth[i] << ": " << format_state_qualified(net, s) << "\n";
        }
        out << "explored " << r.states.size() << " states up to depth " << depth << (r.saturated ? " (saturated)" : "")
            << ", pruned " << r.pruned << ", deadlocks " << deadlocks << ", error hits " << errors << "\n";
        if (first_error) {
            out << "first error trace:\n";
            auto path = r.path_to(*first_error);
            for (std::size_t i = 0; i < path.size(); ++i)
                out << "  " << format_trace_line(net, static_cast<int>(i), path[i].first, path[i].second) << "\n";
        }
        return kOk;
    }

    std::mt19937_64 rng(c.seed);
    out << "seed " << c.seed << "\n";
    for (int run = 0; run < runs; ++run) {
        out << "run " << run << ":\n";
        State s = initial_state(net);
        out << "  " << format_trace_line(net, 0, "", s) << (is_error(s) ? "  [error]" : "") << "\n";
        for (int step = 1; step <= depth; ++step) {
            auto succ = successors(net, s);
            if (succ.empty()) {
                out << "  deadlock\n";
                break;
            }
            std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
            Transition& t = succ[pick(rng)];
            s = std::move(t.target);
            out << "  " << format_trace_line(net, step, t.action, s) << (is_error(s) ? "  [error]" : "") << "\n";
        }
    }
    return kOk;
}

std::string dot_escape(const std::string& s)
{
    std::string o;
    for (char ch : s) {
        if (ch == '"' || ch == '\\')
            o += '\\';
        o += ch;
    }
    return o;
}

std::string export_dot(const Network& net)
{
    std::string o;
    for (const auto& a : net.automata()) {
        o += "digraph \"" + dot_escape(a.name) + "\" {\n";
        o += "  __start [shape=point];\n";
        for (const auto& l : a.locations)
            o += "  \"" + dot_escape(l) + "\";\n";
        o += "  __start -> \"" + dot_escape(a.initial) + "\";\n";
        for (const auto& e : a.edges) {
            std::string label = e.action;
            if (!e.guard.is_true())
                label += " [" + to_string(e.guard) + "]";
            if (!e.updates.empty()) {
                label += " /";
                for (std::size_t i = 0; i < e.updates.size(); ++i)
                    label += (i ? ", " : " ") + e.updates[i].target + " := " + to_string(e.updates[i].expr);
            }
            o += "  \"" + dot_escape(e.source) + "\" -> \"" + dot_escape(e.target) + "\" [label=\"" + dot_escape(label)
                + "\"];\n";
        }
        o += "}\n";
    }
    return o;
}

int cmd_export(const Common& c, const std::string& format, std::ostream& out)
{
    Network net = parse_network(read_file(c.model), c.model);
    std::string text;
    if (format == "dot")
        text = export_dot(net);
    else if (format == "smt2")
        text = emit_script(encode_unfolding(net, c.max));
    else
        throw Error("unknown export format '" + format + "'");
    if (c.out.empty())
        out << text;
    else
        write_file(c.out, text);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Synthesis of stateful priorities for networks of automata", "stateprio"};
    app.require_subcommand(1);

    Common synth_c, check_c, transform_c, sim_c, export_c;
    auto* synth = app.add_subcommand("synth", "synthesize stateful priorities and the transformed network");
    add_common(synth, synth_c, true);

    auto* check = app.add_subcommand("check", "bounded reachability of the query");
    add_common(check, check_c, true);

    std::string priorities;
    auto* transform = app.add_subcommand("transform", "apply a priorities file to a network");
    add_common(transform, transform_c, false);
    transform->add_option("--priorities", priorities, "priorities.json from synth")
        ->required()
        ->check(CLI::ExistingFile);

    int depth = 10;
    int runs = 1;
    std::string mode = "exhaustive";
    auto* simulate = app.add_subcommand("simulate", "explicit exhaustive or random traces");
    add_common(simulate, sim_c, false);
    simulate->add_option("--depth", depth, "trace length / exploration depth")->check(CLI::NonNegativeNumber);
    simulate->add_option("--mode", mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
    simulate->add_option("--runs", runs, "number of random runs")->check(CLI::PositiveNumber);

    std::string format = "dot";
    auto* exp = app.add_subcommand("export", "write DOT graphs or the SMT-LIB unfolding");
    add_common(exp, export_c, false);
    exp->add_option("--format", format, "dot or smt2")->check(CLI::IsMember({"dot", "smt2"}));
    export_c.max = 1;

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back(); // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kFailure;
    }

    try {
        if (synth->parsed())
            return cmd_synth(synth_c, out);
        if (check->parsed())
            return cmd_check(check_c, out);
        if (transform->parsed())
            return cmd_transform(transform_c, priorities, out);
        if (simulate->parsed())
            return cmd_simulate(sim_c, depth, mode, runs, out);
        if (exp->parsed())
            return cmd_export(export_c, format, out);
    } catch (const ParseError& e) {
        for (const auto& d : e.diagnostics())
            err << to_string(d) << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

} // namespace stateprio::cli
