#include "stateprio/synthesis.hpp"

#include "stateprio/error.hpp"

#include <algorithm>
#include <chrono>

namespace stateprio {

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::PrioritiesFound: return "priorities-found";
    case Outcome::ErrorUnreachable: return "error-unreachable";
    case Outcome::InitialIsError: return "initial-is-error";
    case Outcome::CircularityAbort: return "circularity-abort";
    case Outcome::BoundExhausted: return "bound-exhausted";
    }
    return "?";
}

std::vector<std::string> error_actions(const Network& net, const Configuration& pre,
    std::span<const Configuration> errors)
{
    State s = config_to_state(net, pre);
    std::vector<std::string> out;
    for (const auto& action : net.actions())
        if (action_reaches_error(net, s, action, errors))
            out.push_back(action);
    return out;
}

Priority create_prio(const Network& net, const Configuration& pre, const Configuration& avoid,
    std::span<const Configuration> errors)
{
    auto blocker = avoid.true_action();
    if (!blocker)
        throw SynthesisError("avoiding configuration has no single true action");
    auto blockees = error_actions(net, pre, errors);
    if (blockees.empty())
        throw SynthesisError("no action leads from " + format_snapshot(pre) + " into an error");
    for (const auto& be : blockees)
        if (be != *blocker)
            return {be, *blocker};
    throw SynthesisError("priority (" + *blocker + ", " + *blocker + ") would be reflexive");
}

bool check_circular(std::span<const StatefulPriority> stateful, const StatefulPriority& cand)
{
    for (const auto& sp : stateful) {
        if (!sp.pre.same_snapshot(cand.pre))
            continue;
        if (cand.prio.blockee == sp.prio.blocker || cand.prio.blocker == sp.prio.blockee)
            return true;
    }
    return false;
}

Synthesizer::Synthesizer(const Network& net, SynthesisOptions opts)
    : net_(net)
    , opts_(std::move(opts))
    , enc_(net, opts_.max)
{
}

SolverModel Synthesizer::solve_model(std::vector<smt::Term> extra, bool& sat)
{
    UnfoldingFormula f = enc_.unfolding().with(std::move(extra));
    SolverVerdict v = solve(emit_script(f), opts_.solver);
    ++stats_.solver_calls;
    switch (v.status) {
    case SolverStatus::Sat:
        ++stats_.sat;
        sat = true;
        if (opts_.on_model)
            opts_.on_model(enc_, *v.model);
        return std::move(*v.model);
    case SolverStatus::Unsat:
        ++stats_.unsat;
        sat = false;
        return {};
    case SolverStatus::Unknown:
        throw SolverError("solver answered unknown" + (v.message.empty() ? std::string() : ": " + v.message));
    case SolverStatus::SolverError: break;
    }
    std::string detail = v.message;
    if (!v.stderr_text.empty())
        detail += "; stderr: " + v.stderr_text;
    throw SolverError("solver error: " + detail);
}

bool Synthesizer::known_error(const Configuration& c) const
{
    return std::any_of(errors_.begin(), errors_.end(), [&](const Configuration& e) { return e.same_snapshot(c); });
}

std::optional<Configuration> Synthesizer::check_reach(std::span<const Configuration> preerrors,
    const Configuration& err, int step)
{
    ++stats_.reach_queries;
    std::vector<smt::Term> extra;
    extra.push_back(enc_.progress(step));
    for (const auto& c : preerrors)
        extra.push_back(enc_.avoid(step, c));
    for (const auto& c : errors_)
        extra.push_back(enc_.avoid(step, c));
    extra.push_back(enc_.query(step, err));
    bool sat = false;
    SolverModel m = solve_model(std::move(extra), sat);
    if (!sat)
        return std::nullopt;
    return create_config(m, step, net_);
}

bool Synthesizer::check_prios(const Configuration& pre)
{
    ++stats_.prio_queries;
    const int step = pre.step;
    std::vector<smt::Term> base;
    base.push_back(enc_.progress(step));
    base.push_back(enc_.preerror(step, pre));
    for (const auto& e : errors_)
        base.push_back(enc_.error(step, e));

    std::vector<std::string> blockees = error_actions(net_, pre, errors_);
    if (blockees.empty())
        throw SynthesisError("configuration " + format_snapshot(pre) + " has no transition into an error");

    bool added = false;
    for (;;) {
        bool sat = false;
        SolverModel m = solve_model(base, sat);
        if (!sat)
            break;
        Configuration act = create_config(m, step, net_, true);
        auto blocker = act.true_action();
        if (!blocker)
            throw SynthesisError("model at step " + std::to_string(step) + " fires no single action");
        for (const auto& be : blockees) {
            if (be == *blocker)
                continue; // reflexive
            StatefulPriority cand{pre, {be, *blocker}};
            cand.pre.act.clear();
            cand.pre.defaulted.clear();
            if (check_circular(stateful_, cand)) {
                circular_ = cand;
                return added;
            }
            bool dup = std::any_of(stateful_.begin(), stateful_.end(),
                [&](const StatefulPriority& sp) { return same_stateful(sp, cand); });
            if (!dup) {
                stateful_.push_back(std::move(cand));
                added = true;
            }
        }
        base.push_back(smt::mk_not(enc_.action_at(*blocker, step)));
    }
    return added;
}

void Synthesizer::explore(const Configuration& err, int depth)
{
    stats_.max_recursion = std::max(stats_.max_recursion, depth);
    std::vector<Configuration> pre;
    int cnt = 0;
    while (cnt < opts_.max) {
        auto c = check_reach(pre, err, cnt);
        if (c) {
            pre.push_back(std::move(*c));
            found_.push_back(pre.back());
            cnt = 0;
        } else {
            ++cnt;
        }
    }
    const State init = initial_state(net_);
    for (const auto& c : pre) {
        if (circular_)
            return;
        if (check_prios(c))
            continue;
        if (circular_)
            return;
        if (config_matches(net_, init, c)) {
            initial_hit_ = true;
            continue;
        }
        if (known_error(c))
            continue;
        errors_.push_back(c);
        explore(c, depth + 1);
    }
}

SynthesisReport Synthesizer::run(const StateFormula& f)
{
    auto t0 = std::chrono::steady_clock::now();
    SynthesisReport r;
    r.max = opts_.max;
    r.query = to_string(f);

    Configuration err = formula_to_config(net_, f);
    errors_ = {err};
    if (config_matches(net_, initial_state(net_), err)) {
        r.outcome = Outcome::InitialIsError;
        r.notes.push_back("the initial state satisfies the error formula");
    } else {
        explore(err, 0);
        if (circular_)
            r.outcome = Outcome::CircularityAbort;
        else if (initial_hit_)
            r.outcome = Outcome::InitialIsError;
        else if (!stateful_.empty())
            r.outcome = Outcome::PrioritiesFound;
        else if (found_.empty())
            r.outcome = Outcome::ErrorUnreachable;
        else
            r.outcome = Outcome::BoundExhausted;
    }
    if (circular_) {
        r.circular = circular_;
        r.notes.push_back("circular candidate (" + circular_->prio.blockee + ", " + circular_->prio.blocker + ") at "
            + format_snapshot(circular_->pre) + "; priorities found so far are partial");
    }
    if (initial_hit_)
        r.notes.push_back("the initial state is a preError without priorities: the error cannot be avoided");

    std::sort(stateful_.begin(), stateful_.end(), stateful_less);
    r.stateful = stateful_;
    r.errors = errors_;
    r.preerrors = found_;
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.stats = stats_;
    return r;
}

SynthesisReport synthesize(const Network& net, const StateFormula& f, SynthesisOptions opts)
{
    if (opts.max < 1)
        throw SynthesisError("max must be at least 1");
    Synthesizer s(net, std::move(opts));
    return s.run(f);
}

std::optional<std::int64_t> reachability_bound(const Network& net, const SynthesisReport& report,
    const DomainBounds& bounds)
{
    ReachResult r = bfs_reach(net, -1, bounds);
    if (r.pruned > 0 || !r.saturated)
        return std::nullopt;
    std::int64_t hit = 0;
    for (const auto& e : report.errors)
        if (std::any_of(r.states.begin(), r.states.end(), [&](const State& s) { return config_matches(net, s, e); }))
            ++hit;
    return static_cast<std::int64_t>(r.states.size()) - hit;
}

} // namespace stateprio
