#pragma once

#include "flexitex/build.hpp"
#include "flexitex/complete.hpp"
#include "flexitex/highlight.hpp"
#include "flexitex/query.hpp"
#include "flexitex/search.hpp"
#include "flexitex/syntax.hpp"

#include <json.hpp>

namespace flexitex {

nlohmann::json to_json(const SourceSpan& span);
nlohmann::json to_json(const Diagnostic& diagnostic);
nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);
/// Nested AST: {kind, span, text?, name?, delimiter?, tags, children}.
nlohmann::json ast_to_json(const Document& doc, NodeId id = 0);
nlohmann::json to_json(const std::vector<HighlightSpan>& spans);
nlohmann::json to_json(const std::vector<CompletionItem>& items);
nlohmann::json to_json(const Term& term);
/// {variables: [...], bindings: [{var: term}, ...]}
nlohmann::json to_json(const QueryResult& result);
nlohmann::json to_json(const std::vector<SearchHit>& hits);
nlohmann::json to_json(const BuildResult& result);

}  // namespace flexitex
