#pragma once

#include "stateprio/synthesis.hpp"
#include "stateprio/transform.hpp"

#include <string>
#include <vector>

namespace stateprio {

inline constexpr int kSchemaVersion = 1;

/// Human-readable synthesis report.
std::string report_text(const Network& net, const SynthesisReport& r, const TransformOutcome* t = nullptr);

/// Structured report (JSON, schema_version field first).
std::string report_json(const Network& net, const SynthesisReport& r, const TransformOutcome* t = nullptr);

/// Priorities file: `{"schema_version", "network", "stateful": [...]}` with
/// entries `{"pre": {"loc", "var", "step"}, "blockee", "blocker"}`.
std::string priorities_json(const Network& net, const std::vector<StatefulPriority>& sp);

/// Reads a priorities file back. Unknown fields, a schema mismatch or
/// names absent from `net` throw Error.
std::vector<StatefulPriority> read_priorities_json(const std::string& text, const Network& net);

} // namespace stateprio
