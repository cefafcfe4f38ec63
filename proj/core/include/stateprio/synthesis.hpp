#pragma once

#include "stateprio/encoder.hpp"
#include "stateprio/model.hpp"
#include "stateprio/semantics.hpp"
#include "stateprio/solver.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stateprio {

enum class Outcome { PrioritiesFound, ErrorUnreachable, InitialIsError, CircularityAbort, BoundExhausted };

std::string_view to_string(Outcome o);

struct SynthesisStats {
    int solver_calls = 0;
    int sat = 0;
    int unsat = 0;
    int reach_queries = 0;
    int prio_queries = 0;
    int max_recursion = 0;
    double seconds = 0;
};

/// Called once per satisfying model; lets callers audit what the solver saw.
using ModelObserver = std::function<void(const Encoder&, const SolverModel&)>;

struct SynthesisOptions {
    int max = 15;
    SolverConfig solver = SolverConfig::from_env();
    ModelObserver on_model;
};

struct SynthesisReport {
    Outcome outcome = Outcome::ErrorUnreachable;
    int max = 0;
    std::string query;
    std::vector<StatefulPriority> stateful;
    /// Error configuration first, then priority-less preErrors in insertion order.
    std::vector<Configuration> errors;
    /// Every preError found by reachability queries, in discovery order.
    std::vector<Configuration> preerrors;
    /// For circularity-abort: the rejected candidate.
    std::optional<StatefulPriority> circular;
    SynthesisStats stats;
    std::vector<std::string> notes;
};

/// Actions with a transition from the state of `pre` into a configuration
/// in `errors`, sorted.
std::vector<std::string> error_actions(const Network& net, const Configuration& pre,
    std::span<const Configuration> errors);

/// Pairs the first error-reaching action other than the true action of
/// `avoid` with that action. Throws SynthesisError when no action reaches an
/// error or the only candidate is the blocker itself.
Priority create_prio(const Network& net, const Configuration& pre, const Configuration& avoid,
    std::span<const Configuration> errors);

/// Same preError snapshot and one action's role swapped.
bool check_circular(std::span<const StatefulPriority> stateful, const StatefulPriority& cand);

/// Explicit-state side of the synthesis loop. Owns the Errors set and the
/// stateful priorities; one instance per run.
class Synthesizer {
public:
    Synthesizer(const Network& net, SynthesisOptions opts);

    SynthesisReport run(const StateFormula& f);

    /// One reachability query: a new preError at `step` whose successor
    /// matches `err`, avoiding known preErrors and errors. Empty if unsat.
    std::optional<Configuration> check_reach(std::span<const Configuration> preerrors, const Configuration& err,
        int step);
    /// Enumerates blockers from `pre`; true iff a priority was added.
    bool check_prios(const Configuration& pre);
    /// Collects preErrors of `err`, synthesizes priorities, recurses on the
    /// ones without.
    void explore(const Configuration& err, int depth);

    const std::vector<Configuration>& errors() const { return errors_; }
    const std::vector<StatefulPriority>& stateful() const { return stateful_; }
    void set_errors(std::vector<Configuration> e) { errors_ = std::move(e); }
    const SynthesisStats& stats() const { return stats_; }

private:
    SolverModel solve_model(std::vector<smt::Term> extra, bool& sat);
    bool known_error(const Configuration& c) const;

    Network net_;
    SynthesisOptions opts_;
    Encoder enc_;
    std::vector<Configuration> errors_;
    std::vector<StatefulPriority> stateful_;
    std::vector<Configuration> found_;
    std::optional<StatefulPriority> circular_;
    bool initial_hit_ = false;
    SynthesisStats stats_;
};

/// Top-level loop: error config, then explore. Solver failures throw
/// SolverError.
SynthesisReport synthesize(const Network& net, const StateFormula& f, SynthesisOptions opts);

/// |Reach(N)| - |Errors reachable|, computed explicitly; nullopt when the
/// bounded exploration pruned states (the count would not be exact).
std::optional<std::int64_t> reachability_bound(const Network& net, const SynthesisReport& report,
    const DomainBounds& bounds = {});

} // namespace stateprio
