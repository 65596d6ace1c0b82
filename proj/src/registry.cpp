#include "flexitex/registry.hpp"

#include <algorithm>

namespace flexitex {

// ---------------------------------------------------------------------------
// Extension interface defaults
// ---------------------------------------------------------------------------

TagContext::TagContext(Document& doc, const ExtensionHandler& handler, std::span<const std::string> declared)
    : doc_(doc), handler_(handler), declared_(declared) {}

void TagContext::add_tag(NodeId node, std::string_view tag) {
  if (std::find(declared_.begin(), declared_.end(), tag) == declared_.end()) {
    throw ExtensionError("handler '" + handler_.id() + "' attached undeclared tag '" + std::string(tag) + "'");
  }
  auto& tags = doc_.nodes.at(node).tags;
  auto it = std::lower_bound(tags.begin(), tags.end(), tag);
  if (it == tags.end() || *it != tag) tags.insert(it, std::string(tag));
}

void TagContext::add_tag_to_words(NodeId node, std::string_view tag) {
  for (NodeId w : words_in(doc_, node)) add_tag(w, tag);
}

PropertiesAcceptor* nearest_of_type(const PropertiesAcceptor& acceptor, std::string_view type) {
  auto stack = acceptor.stack();
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if ((*it)->has_type(type)) return *it;
  }
  return nullptr;
}

PropertiesAcceptor* nearest_tagged(const PropertiesAcceptor& acceptor, std::string_view tag) {
  auto stack = acceptor.stack();
  const Document& doc = acceptor.context().doc;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if (doc.node((*it)->ast_node()).has_tag(tag)) return *it;
  }
  return nullptr;
}

std::string_view to_string(CompletionKind kind) {
  switch (kind) {
    case CompletionKind::file: return "file";
    case CompletionKind::module_id: return "module-id";
    case CompletionKind::macro: return "macro";
    case CompletionKind::snippet: return "snippet";
  }
  return "macro";
}

void CompletionAcceptor::accept(std::string label, CompletionKind kind, std::optional<std::string> detail) {
  if (label.empty()) return;
  items_.push_back({std::move(label), kind, std::move(detail), source_});
}

std::optional<std::string> ExtensionHandler::syntax_color_uri(std::string_view) const { return std::nullopt; }
bool ExtensionHandler::index(std::string_view, PropertiesAcceptor&) const { return false; }
void ExtensionHandler::validate(std::string_view, NodeId, const ValidationContext&, std::vector<Diagnostic>&) const {}
void ExtensionHandler::autocomplete_tag(std::string_view, const CompletionRequest&, CompletionAcceptor&) const {}
void ExtensionHandler::autocomplete_untagged(const CompletionRequest&, CompletionAcceptor&) const {}
RefactorResult ExtensionHandler::refactor(std::string_view, NodeId) const { return {}; }

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

void Registry::add(std::shared_ptr<const ExtensionHandler> handler) {
  if (!handler) throw ExtensionError("cannot register a null handler");
  const std::string id = handler->id();
  if (find(id)) throw ExtensionError("handler id '" + id + "' is already registered");

  auto names = handler->handled_command_names();
  auto envs = handler->handled_environment_names();
  auto tags = handler->handled_tags();
  bool wildcard = false;

  // Commands and environments share one namespace so dispatch stays unambiguous.
  auto check_name = [&](const std::string& name, const char* what) {
    if (name == kWildcardCommand) {
      if (wildcard_) {
        throw ExtensionError("handler '" + id + "' claims all commands, already claimed by handler '" +
                             wildcard_->id() + "'");
      }
      wildcard = true;
      return;
    }
    const ExtensionHandler* owner = nullptr;
    if (auto it = by_command_.find(name); it != by_command_.end()) owner = it->second;
    if (auto it = by_environment_.find(name); it != by_environment_.end()) owner = it->second;
    if (owner) {
      throw ExtensionError(std::string(what) + " '" + name + "' of handler '" + id +
                           "' is already handled by handler '" + owner->id() + "'");
    }
  };
  for (const auto& n : names) check_name(n, "command");
  for (const auto& n : envs) check_name(n, "environment");
  for (const auto& t : tags) {
    if (t.empty()) throw ExtensionError("handler '" + id + "' declares an empty tag");
    if (auto it = by_tag_.find(t); it != by_tag_.end()) {
      throw ExtensionError("tag '" + t + "' of handler '" + id + "' is already owned by handler '" +
                           it->second->id() + "'");
    }
  }
  {
    auto sorted = tags;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ExtensionError("handler '" + id + "' declares a tag twice");
    }
  }

  const ExtensionHandler* raw = handler.get();
  handlers_.push_back(std::move(handler));
  for (const auto& n : names) {
    if (n != kWildcardCommand) by_command_.emplace(n, raw);
  }
  for (const auto& n : envs) by_environment_.emplace(n, raw);
  for (const auto& t : tags) by_tag_.emplace(t, raw);
  if (wildcard) wildcard_ = raw;
}

const ExtensionHandler& Registry::handler_for_tag(std::string_view tag) const {
  auto it = by_tag_.find(tag);
  if (it == by_tag_.end()) throw ExtensionError("unknown tag '" + std::string(tag) + "'");
  return *it->second;
}

const ExtensionHandler* Registry::handler_for_command(std::string_view name) const {
  auto it = by_command_.find(name);
  return it == by_command_.end() ? nullptr : it->second;
}

const ExtensionHandler* Registry::handler_for_environment(std::string_view name) const {
  auto it = by_environment_.find(name);
  return it == by_environment_.end() ? nullptr : it->second;
}

const ExtensionHandler* Registry::find(std::string_view id) const {
  for (const auto& h : handlers_) {
    if (h->id() == id) return h.get();
  }
  return nullptr;
}

std::vector<std::string> Registry::environment_names() const {
  std::vector<std::string> out;
  for (const auto& [name, handler] : by_environment_) out.push_back(name);
  return out;
}

Registry Registry::without(std::string_view id) const {
  Registry out;
  for (const auto& h : handlers_) {
    if (h->id() != id) out.add(h);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tagging
// ---------------------------------------------------------------------------

const ExtensionHandler* dispatch_target(const Registry& registry, const Document& doc, NodeId command) {
  const Node& n = doc.node(command);
  if (n.kind != NodeKind::command) return nullptr;
  if (n.name == "end") return nullptr;
  const ExtensionHandler* handler = nullptr;
  if (n.name == "begin") {
    if (auto env = environment_name(doc, command)) handler = registry.handler_for_environment(*env);
  } else {
    handler = registry.handler_for_command(n.name);
  }
  return handler ? handler : registry.wildcard_handler();
}

Document tag_document(const Registry& registry, Document doc) {
  for (Node& n : doc.nodes) n.tags.clear();
  std::map<const ExtensionHandler*, std::vector<std::string>> declared;
  for (NodeId id = 0; id < doc.nodes.size(); ++id) {
    const ExtensionHandler* handler = dispatch_target(registry, doc, id);
    if (!handler) continue;
    auto [it, inserted] = declared.try_emplace(handler);
    if (inserted) it->second = handler->handled_tags();
    TagContext context(doc, *handler, it->second);
    handler->add_node_tags(context, id);
  }
  return doc;
}

}  // namespace flexitex
