#pragma once

#include "flexitex/registry.hpp"

#include <string>
#include <vector>

namespace flexitex {

struct HighlightSpan {
  SourceSpan span;
  std::string category;
  std::string description;
  std::string source;  ///< handler id, empty for the default command category

  bool operator==(const HighlightSpan&) const = default;
};

/// Colors a tagged document. Tagged commands color their head, other tagged
/// nodes their whole span; untagged commands get the default command
/// category; nested colorings are resolved in favor of the deepest node.
/// Output spans are sorted and never overlap. Throws ExtensionError when a
/// handler maps a tag to a category it did not declare.
std::vector<HighlightSpan> highlight(const Document& tagged, const Registry& registry);

}  // namespace flexitex
