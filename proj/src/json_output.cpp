#include "flexitex/json_output.hpp"

namespace flexitex {

using nlohmann::json;

json to_json(const SourceSpan& span) { return {{"start", span.start}, {"end", span.end}}; }

json to_json(const Diagnostic& diagnostic) {
  return {{"severity", std::string(to_string(diagnostic.severity))},
          {"code", diagnostic.code},
          {"message", diagnostic.message},
          {"file", diagnostic.file},
          {"span", to_json(diagnostic.span)}};
}

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) out.push_back(to_json(d));
  return out;
}

json ast_to_json(const Document& doc, NodeId root) {
  auto make = [&](NodeId id) {
    const Node& n = doc.nodes[id];
    json j = {{"kind", std::string(to_string(n.kind))}, {"span", to_json(n.span)}};
    if (n.is_leaf()) j["text"] = n.text;
    if (n.kind == NodeKind::command) j["name"] = n.name;
    if (n.kind == NodeKind::option) {
      j["delimiter"] = n.delimiter == Delimiter::brace ? "brace" : "bracket";
      if (!n.closed) j["closed"] = false;
    }
    j["tags"] = n.tags;
    j["children"] = json::array();
    return j;
  };
  // Iterative so that deeply nested input cannot exhaust the stack.
  json out = make(root);
  std::vector<std::pair<NodeId, json*>> work{{root, &out}};
  while (!work.empty()) {
    auto [id, target] = work.back();
    work.pop_back();
    const Node& n = doc.nodes[id];
    if (n.children.empty()) continue;
    json& children = (*target)["children"];
    for (NodeId child : n.children) children.push_back(make(child));
    for (std::size_t i = 0; i < n.children.size(); ++i) work.push_back({n.children[i], &children[i]});
  }
  return out;
}

json to_json(const std::vector<HighlightSpan>& spans) {
  json out = json::array();
  for (const auto& s : spans) {
    out.push_back({{"start", s.span.start},
                   {"end", s.span.end},
                   {"category", s.category},
                   {"description", s.description},
                   {"source", s.source}});
  }
  return out;
}

json to_json(const std::vector<CompletionItem>& items) {
  json out = json::array();
  for (const auto& item : items) {
    json j = {{"label", item.label}, {"kind", std::string(to_string(item.kind))}, {"source", item.source}};
    if (item.detail) j["detail"] = *item.detail;
    out.push_back(std::move(j));
  }
  return out;
}

json to_json(const Term& term) {
  switch (term.kind) {
    case Term::Kind::iri:
      return {{"type", "iri"}, {"value", term.value}};
    case Term::Kind::string:
      return {{"type", "literal"}, {"value", term.value}};
    case Term::Kind::integer:
      return {{"type", "integer"}, {"value", term.as_integer()}};
  }
  return nullptr;
}

json to_json(const QueryResult& result) {
  json bindings = json::array();
  for (const auto& row : result.rows) {
    json entry = json::object();
    for (std::size_t i = 0; i < result.variables.size(); ++i) entry[result.variables[i]] = to_json(row[i]);
    bindings.push_back(std::move(entry));
  }
  return {{"variables", result.variables}, {"bindings", bindings}};
}

json to_json(const std::vector<SearchHit>& hits) {
  json out = json::array();
  for (const auto& hit : hits) {
    json j = {{"file", hit.file},
              {"span", to_json(hit.span)},
              {"definiendum", hit.definiendum},
              {"snippet", hit.snippet},
              {"score", hit.score}};
    j["title"] = hit.title ? json(*hit.title) : json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

json to_json(const BuildResult& result) {
  json steps = json::array();
  for (const auto& step : result.steps) {
    steps.push_back({{"id", step.id}, {"argv", step.argv}, {"exit_status", step.exit_status}});
  }
  json artifacts = json::array();
  for (const auto& a : result.artifacts) artifacts.push_back(a.generic_string());
  return {{"success", result.success},
          {"steps", steps},
          {"artifacts", artifacts},
          {"diagnostics", to_json(result.diagnostics)}};
}

}  // namespace flexitex
