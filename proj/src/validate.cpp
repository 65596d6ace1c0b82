#include "flexitex/validate.hpp"

#include "flexitex/index.hpp"

namespace flexitex {

std::vector<Diagnostic> validate(Indexer& indexer, const std::string& file) {
  auto doc = indexer.document(file);
  std::vector<Diagnostic> out = doc->diagnostics;
  ValidationContext context{indexer, *doc, file};
  for (NodeId id = 0; id < doc->nodes.size(); ++id) {
    for (const auto& tag : doc->nodes[id].tags) {
      indexer.registry().handler_for_tag(tag).validate(tag, id, context, out);
    }
  }
  for (auto& d : out) {
    if (d.file.empty()) d.file = file;
  }
  sort_unique(out);
  return out;
}

int lint_exit_code(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::error) return 1;
  }
  return 0;
}

}  // namespace flexitex
