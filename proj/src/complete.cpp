#include "flexitex/complete.hpp"

#include "flexitex/index.hpp"

#include <algorithm>
#include <set>

namespace flexitex {

namespace {

/// `candidate` if its leaf or command head has start < offset <= end.
NodeId touching_leaf(const Document& doc, std::size_t offset, NodeId candidate) {
  if (candidate == no_node) return no_node;
  const Node& n = doc.node(candidate);
  SourceSpan head = n.head_span();
  if (head.start < offset && offset <= head.end) return candidate;
  return no_node;
}

}  // namespace

std::vector<CompletionItem> complete_at(Indexer& indexer, const std::string& file, std::size_t offset,
                                        std::optional<std::string> prefix) {
  auto doc_ptr = indexer.document(file);
  const Document& doc = *doc_ptr;
  NodeLookup lookup = node_at(doc, offset);

  NodeId node = no_node;
  const Node& deepest = doc.node(lookup.deepest);
  if (deepest.is_leaf() || deepest.kind == NodeKind::command) node = touching_leaf(doc, offset, lookup.deepest);
  if (node == no_node) node = touching_leaf(doc, offset, lookup.preceding_leaf);
  if (node == no_node) {
    // Inside an empty stretch of an option: complete for its command.
    for (NodeId n = lookup.deepest; n != no_node && n != 0; n = doc.node(n).parent) {
      if (doc.node(n).kind == NodeKind::option) {
        NodeId parent = doc.node(n).parent;
        if (parent != no_node && doc.node(parent).kind == NodeKind::command) node = parent;
        break;
      }
    }
  }
  if (node == no_node) node = lookup.preceding_leaf;

  std::string derived;
  if (node != no_node) {
    const Node& n = doc.node(node);
    SourceSpan head = n.head_span();
    bool touches = head.start < offset && offset <= head.end;
    if (touches && (n.kind == NodeKind::word || (n.kind == NodeKind::command && n.tags.empty()))) {
      derived = doc.source.substr(head.start, offset - head.start);
    }
  }
  const std::string effective = prefix.value_or(derived);

  CompletionRequest request{indexer, doc, file, offset, node, effective};
  std::vector<CompletionItem> items;
  if (node != no_node) {
    for (const auto& tag : doc.node(node).tags) {
      const ExtensionHandler& handler = indexer.registry().handler_for_tag(tag);
      CompletionAcceptor acceptor(handler.id());
      handler.autocomplete_tag(tag, request, acceptor);
      items.insert(items.end(), acceptor.items().begin(), acceptor.items().end());
    }
  }
  if (items.empty()) {
    for (const auto& handler : indexer.registry().handlers()) {
      CompletionAcceptor acceptor(handler->id());
      handler->autocomplete_untagged(request, acceptor);
      items.insert(items.end(), acceptor.items().begin(), acceptor.items().end());
    }
    for (const auto& env : indexer.registry().environment_names()) {
      const ExtensionHandler* owner = indexer.registry().handler_for_environment(env);
      items.push_back({"\\begin{" + env + "}", CompletionKind::snippet, std::nullopt, owner->id()});
    }
  }

  std::vector<CompletionItem> out;
  std::set<std::pair<std::string, CompletionKind>> seen;
  for (auto& item : items) {
    if (item.label.empty() || item.label.compare(0, effective.size(), effective) != 0) continue;
    if (!seen.insert({item.label, item.kind}).second) continue;
    out.push_back(std::move(item));
  }
  std::sort(out.begin(), out.end(), [](const CompletionItem& a, const CompletionItem& b) {
    return std::tie(a.kind, a.label) < std::tie(b.kind, b.label);
  });
  return out;
}

}  // namespace flexitex
