#include "flexitex/highlight.hpp"

#include <map>

namespace flexitex {

namespace {

struct Paint {
  std::size_t end;
  const HighlightSpan* style;
};

/// Paints [start, end) over whatever lies beneath.
void paint(std::map<std::size_t, Paint>& canvas, std::size_t start, std::size_t end, const HighlightSpan* style) {
  if (start >= end) return;
  // Split a segment straddling `start` or `end`.
  auto split = [&](std::size_t at) {
    auto it = canvas.upper_bound(at);
    if (it == canvas.begin()) return;
    --it;
    if (it->first < at && it->second.end > at) {
      Paint tail{it->second.end, it->second.style};
      it->second.end = at;
      canvas.emplace(at, tail);
    }
  };
  split(start);
  split(end);
  canvas.erase(canvas.lower_bound(start), canvas.lower_bound(end));
  canvas.emplace(start, Paint{end, style});
}

}  // namespace

std::vector<HighlightSpan> highlight(const Document& tagged, const Registry& registry) {
  std::vector<HighlightSpan> styles;
  std::vector<std::pair<SourceSpan, std::size_t>> strokes;  // in pre-order
  styles.reserve(tagged.nodes.size());

  std::map<const ExtensionHandler*, std::vector<HighlightCategory>> declared;
  auto category_of = [&](const ExtensionHandler& handler, const std::string& uri) -> const HighlightCategory& {
    auto [it, inserted] = declared.try_emplace(&handler);
    if (inserted) it->second = handler.highlighting_uris();
    for (const auto& c : it->second) {
      if (c.uri == uri) return c;
    }
    throw ExtensionError("handler '" + handler.id() + "' returned undeclared highlighting category '" + uri + "'");
  };

  for (NodeId id = 0; id < tagged.nodes.size(); ++id) {
    const Node& n = tagged.nodes[id];
    const HighlightSpan* chosen = nullptr;
    for (const auto& tag : n.tags) {
      const ExtensionHandler& handler = registry.handler_for_tag(tag);
      auto uri = handler.syntax_color_uri(tag);
      if (!uri) continue;
      const HighlightCategory& category = category_of(handler, *uri);
      styles.push_back({{}, category.uri, category.description, handler.id()});
      chosen = &styles.back();
      break;
    }
    if (!chosen && n.kind == NodeKind::command) {
      styles.push_back({{}, std::string(kCommandCategory), "Command", ""});
      chosen = &styles.back();
    }
    if (!chosen) continue;
    SourceSpan span = n.kind == NodeKind::command ? n.head_span() : n.span;
    strokes.emplace_back(span, styles.size() - 1);
  }

  std::map<std::size_t, Paint> canvas;
  for (const auto& [span, style] : strokes) paint(canvas, span.start, span.end, &styles[style]);

  std::vector<HighlightSpan> out;
  out.reserve(canvas.size());
  for (const auto& [start, p] : canvas) {
    HighlightSpan h = *p.style;
    h.span = {start, p.end};
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace flexitex
