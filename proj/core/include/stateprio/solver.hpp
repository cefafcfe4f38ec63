#pragma once

#include "stateprio/encoder.hpp"
#include "stateprio/model.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stateprio {

struct SolverConfig {
    std::string path = "z3";
    std::vector<std::string> args;
    std::chrono::milliseconds timeout{60000};
    /// When set, every script is also written to `<dir>/NNNNNN.smt2`.
    std::optional<std::string> keep_scripts;

    /// `path` from STATEPRIO_SOLVER if set, "z3" otherwise.
    static SolverConfig from_env();
};

enum class SolverStatus { Sat, Unsat, Unknown, SolverError };

std::string_view to_string(SolverStatus s);

/// Values of the step variables a solver reported, keyed by symbol name.
using SolverModel = std::map<std::string, Value>;

struct SolverVerdict {
    SolverStatus status = SolverStatus::Unknown;
    std::optional<SolverModel> model; // present iff status == Sat
    std::string stdout_text;
    std::string stderr_text;
    std::string message; // reason for SolverError / Unknown
    bool timed_out = false;
    std::chrono::milliseconds wall{0};
};

/// Runs `<path> <args...> <script-file>` and parses the answer. Timeouts
/// yield Unknown. Throws SolverError when the binary cannot be started.
SolverVerdict solve(const std::string& script, const SolverConfig& cfg);

/// Parses solver stdout: the first status line plus an optional model.
SolverVerdict parse_solver_output(const std::string& out);

/// Reads one step of a model back into a configuration. Missing values are
/// defaulted (false, zero, step-0 location) and listed in `defaulted`.
/// With `act_only`, loc/var stay empty.
Configuration create_config(const SolverModel& m, int step, const Network& net, bool act_only = false);

/// Structural checks on a model of `enc`'s unfolding: at most one true
/// action per step, and every automaton with all its actions false keeps
/// its location and the variables only it writes. One message per
/// violation; missing symbols count as violations.
std::vector<std::string> audit_model(const Encoder& enc, const SolverModel& m);

} // namespace stateprio
