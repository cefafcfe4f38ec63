#pragma once

#include "stateprio/error.hpp"
#include "stateprio/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace stateprio {

/// Lexical, syntactic or validation failure. Carries one diagnostic per
/// problem; syntax errors stop at the first one.
class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

/// Parses and validates a `.net` model.
///
///   network   := 'network' ID '{' vardecl* automaton+ '}'
///   vardecl   := ('int'|'real'|'bool') ID '=' literal ';'
///   automaton := 'automaton' ID '{' 'init' ID ';' 'locations' ID (',' ID)* ';' edge* '}'
///   edge      := 'edge' ID '->' ID 'on' ID ('when' expr)? ('do' assign (',' assign)*)? ';'
///
/// Location names may also be plain numerals (`locations 1, 2;`).
Network parse_network(std::string_view text, const std::string& file = "<input>");

/// Parses a `.q` query `EF ( lit && ... )` with lit := '!'? ID '.' ID and
/// resolves it against `net`.
StateFormula parse_query(std::string_view text, const Network& net, const std::string& file = "<query>");

/// Parses a standalone expression (no validation against a network).
Expr parse_expr(std::string_view text);

/// Canonical DSL text; parse_network(print_network(n)) == n.
std::string print_network(const Network& net);

std::string read_file(const std::string& path);

} // namespace stateprio
