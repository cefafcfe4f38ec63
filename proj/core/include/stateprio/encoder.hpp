#pragma once

#include "stateprio/model.hpp"
#include "stateprio/smt.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stateprio {

/// Name of the copy of `base` at unfolding step `i`.
std::string step_name(const std::string& base, int step);

struct StepVar {
    /// Intermediate: value of a variable between two holders' updates
    /// within one broadcast step.
    enum class Kind { Action, Automaton, Variable, Intermediate };
    Kind kind = Kind::Action;
    std::string base;
    int step = 0;
    smt::Sort sort = smt::Sort::Bool;
    std::string suffix; // Intermediate only: "__<action>__<holder position>"

    std::string name() const { return step_name(base, step) + suffix; }
};

/// I and T of the k-step unfolding plus constraints conjoined later.
/// Values are immutable; with() returns an extended copy.
struct UnfoldingFormula {
    int k = 0;
    std::string logic;
    std::vector<StepVar> decls;
    smt::Term init;
    std::vector<smt::Term> trans;
    std::vector<smt::Term> extra;
    /// ";"-prefixed comment lines emitted ahead of the declarations.
    std::vector<std::string> notes;

    UnfoldingFormula with(smt::Term t) const;
    UnfoldingFormula with(std::vector<smt::Term> ts) const;
};

/// Builds the unfolding of a network and the constraint families used by
/// synthesis. Construction validates the network; a bound below 1 or
/// non-linear arithmetic throws EncodingError.
///
/// Framing. Every edge clause keeps unchanged the variables it does not
/// write, unless another holder of the same action writes them. Idle
/// automata keep the variables only they write. A variable written by
/// several automata is held by a per-step stutter clause when no action
/// fires, and never-written variables are held at every step. Variables
/// that several holders of one shared action touch are passed through
/// intermediate copies in holder order.
class Encoder {
public:
    Encoder(const Network& net, int k);

    const Network& network() const { return net_; }
    int bound() const { return k_; }
    const UnfoldingFormula& unfolding() const { return formula_; }

    smt::Term action_at(const std::string& action, int step) const;
    smt::Term automaton_at(const std::string& automaton, int step) const;
    smt::Term var_at(const std::string& var, int step) const;

    /// P: a change of location or variable at every step 0..j.
    smt::Term progress(int j) const;
    /// Q: step j+1 matches c.
    smt::Term query(int j, const Configuration& c) const;
    /// D: steps 0..j all differ from c.
    smt::Term avoid(int j, const Configuration& c) const;
    /// R: step j matches c.
    smt::Term preerror(int j, const Configuration& c) const;
    /// E: step j+1 differs from c.
    smt::Term error(int j, const Configuration& c) const;

    /// Translates an expression over network variables at `step`.
    smt::Term translate(const Expr& e, int step) const;
    smt::Term translate(const Expr& e, const std::function<smt::Term(const std::string&)>& var) const;

    /// Variables written by more than one automaton.
    const std::set<std::string>& shared_written() const { return shared_written_; }
    /// Automata updating `var` on some edge (empty for never-written ones).
    const std::set<std::size_t>& writers(const std::string& var) const;

private:
    smt::Term snapshot_match(int step, const Configuration& c) const;
    smt::Term snapshot_differs(int step, const Configuration& c) const;
    void check_step(int j, int lo, int hi, const char* what) const;
    smt::Term location_value(const std::string& automaton, const std::string& loc) const;

    Network net_;
    int k_;
    UnfoldingFormula formula_;
    std::set<std::string> shared_written_;
    std::map<std::string, std::set<std::size_t>> writers_;
};

UnfoldingFormula encode_unfolding(const Network& net, int k);

/// Complete SMT-LIB2 script: options, logic, declarations, one assertion per
/// constraint, check-sat and get-model.
std::string emit_script(const UnfoldingFormula& f);

} // namespace stateprio
