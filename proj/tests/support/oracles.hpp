#pragma once

// Independent reference implementations used to check the library. They
// deliberately share no code paths with the implementations they check.

#include "flexitex/syntax.hpp"

#include <string>
#include <utility>
#include <vector>

namespace flexitex::testing {

/// Character-at-a-time reference scanner: (kind, text) per token.
std::vector<std::pair<TokenKind, std::string>> reference_scan(std::string_view source);

/// Maximum number of properly nested, name-equal begin/end pairs, found by
/// enumerating every nested matching.
int brute_force_max_pairs(const std::vector<EnvMarker>& markers);

/// node_at by scanning every node.
NodeLookup linear_node_at(const Document& doc, std::size_t offset);

}  // namespace flexitex::testing
