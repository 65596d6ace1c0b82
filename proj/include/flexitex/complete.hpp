#pragma once

#include "flexitex/extension.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flexitex {

class Indexer;

/// Completion at `offset` of `file`. The node under the cursor is the leaf
/// the offset touches (start < offset <= end), or else the preceding leaf;
/// when the offset sits inside an option with no leaf, the owning command.
/// Its tags are dispatched to their handlers; if there are none, or they
/// propose nothing, every handler's untagged completion runs and
/// environment snippets are added. Without an explicit `prefix`, the text
/// of the touched Word (or untagged command head) up to the offset is used.
/// Results are deduplicated by (label, kind), filtered by prefix and sorted
/// by (kind, label). Throws SyntaxError when offset is out of range.
std::vector<CompletionItem> complete_at(Indexer& indexer, const std::string& file, std::size_t offset,
                                        std::optional<std::string> prefix = std::nullopt);

}  // namespace flexitex
