#pragma once

#include "flexitex/store.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PatternTerm {
  std::optional<std::string> variable;  ///< name without '?'
  Term term;                            ///< used when not a variable

  bool operator==(const PatternTerm&) const = default;
};

struct TriplePattern {
  std::array<PatternTerm, 3> terms;
  bool operator==(const TriplePattern&) const = default;
};

struct Query {
  std::vector<TriplePattern> patterns;
  /// Output columns: the SELECT list if given, else every variable in order
  /// of first appearance.
  std::vector<std::string> variables;
  bool projected = false;
};

struct QueryResult {
  std::vector<std::string> variables;
  std::vector<std::vector<Term>> rows;  ///< sorted lexicographically
};

/// Parses a conjunction of triple patterns separated by ';', '.' or newlines.
///
///   ?var            variable
///   <iri>           absolute IRI
///   rdf:x IDE:x oo:x xsd:x   prefixed names
///   "text"          string literal (\" \\ \n \t \r escapes)
///   42              integer literal
///
/// An optional leading `SELECT ?a ?b WHERE` restricts and orders the output
/// columns; braces around the pattern list are ignored.
Query parse_query(std::string_view text);

/// All solutions of the conjunction (natural join). An empty conjunction has
/// exactly one, empty solution. Projected results contain no duplicate rows.
QueryResult evaluate(const Store& store, const Query& query);

/// Expands prefixed names (`IDE:hasModule`) to full IRIs; returns nullopt
/// for unknown prefixes.
std::optional<std::string> expand_prefixed(std::string_view name);

}  // namespace flexitex
