#include "flexitex/handlers.hpp"

#include "flexitex/index.hpp"
#include "flexitex/modules.hpp"
#include "flexitex/vocab.hpp"

#include <algorithm>
#include <filesystem>

namespace flexitex {

namespace fs = std::filesystem;

namespace {

PropertiesAcceptor& theory_or_root(const PropertiesAcceptor& acceptor) {
  if (auto* theory = nearest_of_type(acceptor, vocab::oo_theory)) return *theory;
  return *acceptor.stack().front();
}

/// Span covering the words of an option, or the option itself when empty.
SourceSpan content_span(const Document& doc, NodeId option) {
  auto words = words_in(doc, option);
  if (words.empty()) return doc.node(option).span;
  return {doc.node(words.front()).span.start, doc.node(words.back()).span.end};
}

/// Innermost command carrying `tag`, starting at `node` and walking up.
NodeId enclosing_tagged(const Document& doc, NodeId node, std::string_view tag) {
  for (NodeId n = node; n != no_node; n = doc.node(n).parent) {
    if (doc.node(n).has_tag(tag)) return n;
  }
  return no_node;
}

const EnvironmentPair* pair_of(const Document& doc, NodeId begin) {
  for (const auto& p : doc.env_pairs) {
    if (p.begin == begin) return &p;
  }
  return nullptr;
}

bool inside_option(const Document& doc, NodeId option, std::size_t offset) {
  const Node& n = doc.node(option);
  if (offset <= n.span.start) return false;
  return n.closed ? offset < n.span.end : offset <= n.span.end;
}

std::vector<std::string> split_names(std::string_view value) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string_view t = trim(current);
    if (!t.empty()) out.emplace_back(t);
    current.clear();
  };
  for (char c : value) {
    if (c == ',') flush();
    else if (c != '{' && c != '}') current += c;
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------

class ImportModuleHandler final : public ExtensionHandler {
 public:
  std::string id() const override { return "importmodule"; }
  std::vector<std::string> handled_command_names() const override { return {"importmodule"}; }
  std::vector<std::string> handled_tags() const override {
    return {std::string(tags::import_command), std::string(tags::import_file), std::string(tags::import_id)};
  }
  std::vector<HighlightCategory> highlighting_uris() const override {
    return {{std::string(categories::command), "Command"},
            {std::string(categories::external_ref), "External references"}};
  }

  void add_node_tags(TagContext& context, NodeId command) const override {
    const Document& doc = context.document();
    context.add_tag(command, tags::import_command);
    NodeId file = first_option(doc, command, Delimiter::bracket);
    if (file == no_node) return;
    context.add_tag_to_words(file, tags::import_file);
    NodeId id = first_option(doc, command, Delimiter::brace);
    if (id != no_node) context.add_tag_to_words(id, tags::import_id);
  }

  std::optional<std::string> syntax_color_uri(std::string_view tag) const override {
    if (tag == tags::import_command) return std::string(categories::command);
    if (tag == tags::import_file || tag == tags::import_id) return std::string(categories::external_ref);
    return std::nullopt;
  }

  bool index(std::string_view tag, PropertiesAcceptor& properties) const override {
    const IndexContext& ctx = properties.context();
    if (tag == tags::import_command) {
      properties.add_resource(vocab::rdf_type, vocab::ide_import_module_command);
      theory_or_root(properties).add_link(vocab::ide_has_import, properties);
      return true;
    }
    PropertiesAcceptor* command = nearest_tagged(properties, tags::import_command);
    if (!command) return false;
    if (tag == tags::import_file) {
      NodeId option = first_option(ctx.doc, command->ast_node(), Delimiter::bracket);
      std::string raw = option_text(ctx.doc, option);
      command->add_string(vocab::ide_module_file, raw);
      command->add_string(vocab::ide_resolved_file, resolve_import_path(ctx.file, raw));
    } else if (tag == tags::import_id) {
      NodeId option = first_option(ctx.doc, command->ast_node(), Delimiter::brace);
      command->add_string(vocab::ide_module_id, option_text(ctx.doc, option));
    }
    return false;
  }

  void validate(std::string_view tag, NodeId node, const ValidationContext& context,
                std::vector<Diagnostic>& out) const override {
    if (tag != tags::import_command) return;
    const Document& doc = context.doc;
    NodeId file_opt = first_option(doc, node, Delimiter::bracket);
    if (file_opt == no_node) return;
    std::string raw = option_text(doc, file_opt);
    if (raw.empty()) return;
    Workspace& ws = context.indexer.workspace();
    std::string target = ws.resolve_import(context.file, raw);
    if (!ws.exists(target)) {
      out.push_back({Severity::error, std::string(codes::missing_file),
                     "file '" + raw + "' does not exist (resolved to " + target + ")", context.file,
                     content_span(doc, file_opt)});
      return;
    }
    NodeId id_opt = first_option(doc, node, Delimiter::brace);
    if (id_opt == no_node) return;
    std::string module = option_text(doc, id_opt);
    if (module.empty()) return;
    auto ids = context.indexer.module_ids(target);
    if (!std::binary_search(ids.begin(), ids.end(), module)) {
      out.push_back({Severity::error, std::string(codes::unknown_module_id),
                     "module '" + module + "' is not defined in " + target, context.file,
                     content_span(doc, id_opt)});
      return;
    }

    ModuleGraph graph = ModuleGraph::explore(context.indexer, {context.file});
    const FileSummary* summary = graph.summary(context.file);
    if (!summary) return;
    const std::size_t start = doc.node(node).span.start;
    auto locate = [&](const ModuleInfo& m) -> std::optional<std::size_t> {
      for (std::size_t i = 0; i < m.imports.size(); ++i) {
        if (m.imports[i].span.start == start) return i;
      }
      return std::nullopt;
    };
    const ModuleInfo* owner = &summary->document;
    std::optional<std::size_t> index = locate(summary->document);
    for (const auto& m : summary->modules) {
      if (index) break;
      if ((index = locate(m))) owner = &m;
    }
    if (!index || owner->anonymous) return;
    ModuleKey key{context.file, owner->id};
    if (graph.module(key) != owner) return;  // shadowed by an earlier module with the same id

    auto redundant = graph.redundant_imports(key);
    if (std::find(redundant.begin(), redundant.end(), *index) != redundant.end()) {
      out.push_back({Severity::warning, std::string(codes::redundant_import),
                     "redundant import of module '" + module + "': it is already imported by " +
                         (owner->id.empty() ? std::string("this document") : "module '" + owner->id + "'") +
                         " through other imports",
                     context.file, doc.node(node).span});
    }
    for (const auto& cycle : graph.cycles()) {
      if (cycle.edge.from != key || cycle.edge.import_index != *index) continue;
      std::string chain;
      for (const auto& m : cycle.members) {
        if (!chain.empty()) chain += ", ";
        chain += m.file + ":" + (m.id.empty() ? std::string("<document>") : m.id);
      }
      out.push_back({Severity::warning, std::string(codes::import_cycle), "import cycle between " + chain,
                     context.file, doc.node(node).span});
    }
  }

  void autocomplete_tag(std::string_view tag, const CompletionRequest& request,
                        CompletionAcceptor& acceptor) const override {
    const Document& doc = request.doc;
    NodeId command = enclosing_tagged(doc, request.node, tags::import_command);
    if (command == no_node) return;
    (void)tag;
    NodeId file_opt = first_option(doc, command, Delimiter::bracket);
    NodeId id_opt = first_option(doc, command, Delimiter::brace);
    Workspace& ws = request.indexer.workspace();
    const fs::path dir = ws.absolute(request.file).parent_path();

    if (file_opt != no_node && inside_option(doc, file_opt, request.offset)) {
      const std::string& prefix = request.prefix;
      auto slash = prefix.rfind('/');
      std::string dirpart = slash == std::string::npos ? std::string() : prefix.substr(0, slash + 1);
      for (const auto& [name, is_dir] : entries(dir / dirpart)) {
        acceptor.accept(dirpart + name + (is_dir ? "/" : ""), CompletionKind::file);
      }
      return;
    }
    if (id_opt != no_node && inside_option(doc, id_opt, request.offset)) {
      if (file_opt == no_node) return;
      std::string target = ws.resolve_import(request.file, option_text(doc, file_opt));
      if (!ws.exists(target)) return;
      std::string self;
      if (target == request.file) {
        ModuleGraph graph = ModuleGraph::explore(request.indexer, {request.file});
        if (const FileSummary* s = graph.summary(request.file)) self = s->scope_at(request.offset).id;
      }
      for (const auto& id : request.indexer.module_ids(target)) {
        if (id != self) acceptor.accept(id, CompletionKind::module_id);
      }
      return;
    }
    if (request.node == command) {
      for (const auto& [name, is_dir] : entries(dir)) {
        acceptor.accept("[" + name + (is_dir ? "/" : "") + "]", CompletionKind::file);
      }
    }
  }

 private:
  /// Directories and .tex files (extension dropped) in `dir`, sorted.
  static std::vector<std::pair<std::string, bool>> entries(const fs::path& dir) {
    std::vector<std::pair<std::string, bool>> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return out;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      std::string name = entry.path().filename().string();
      if (entry.is_directory(ec)) {
        out.emplace_back(name, true);
      } else if (entry.path().extension() == ".tex") {
        out.emplace_back(entry.path().stem().string(), false);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// ---------------------------------------------------------------------------

class ModuleHandler final : public ExtensionHandler {
 public:
  std::string id() const override { return "module"; }
  std::vector<std::string> handled_environment_names() const override { return {"module"}; }
  std::vector<std::string> handled_tags() const override {
    return {std::string(tags::module_begin), std::string(tags::module_id)};
  }
  std::vector<HighlightCategory> highlighting_uris() const override {
    return {{std::string(categories::command), "Command"},
            {std::string(categories::module_name), "Module names"}};
  }

  void add_node_tags(TagContext& context, NodeId command) const override {
    context.add_tag(command, tags::module_begin);
    if (const KeyValue* kv = id_key(context.document(), command)) {
      for (NodeId v : kv->value_nodes) context.add_tag(v, tags::module_id);
    }
  }

  std::optional<std::string> syntax_color_uri(std::string_view tag) const override {
    if (tag == tags::module_begin) return std::string(categories::command);
    if (tag == tags::module_id) return std::string(categories::module_name);
    return std::nullopt;
  }

  bool index(std::string_view tag, PropertiesAcceptor& properties) const override {
    const IndexContext& ctx = properties.context();
    if (tag == tags::module_begin) {
      properties.add_resource(vocab::rdf_type, vocab::oo_theory);
      if (!id_key(ctx.doc, properties.ast_node())) {
        properties.add_string(vocab::rdf_id, "anonymous:" + ctx.file + ":" +
                                                 std::to_string(ctx.doc.node(properties.ast_node()).span.start));
        properties.add_integer(vocab::ide_anonymous, 1);
      }
      properties.stack().front()->add_link(vocab::ide_has_module, properties);
      return true;
    }
    if (tag == tags::module_id) {
      if (PropertiesAcceptor* module = nearest_tagged(properties, tags::module_begin)) {
        if (const KeyValue* kv = id_key(ctx.doc, module->ast_node())) module->add_string(vocab::rdf_id, kv->value);
      }
    }
    return false;
  }

  void validate(std::string_view tag, NodeId node, const ValidationContext& context,
                std::vector<Diagnostic>& out) const override {
    if (tag != tags::module_begin || id_key(context.doc, node)) return;
    out.push_back({Severity::warning, std::string(codes::missing_module_id), "module has no id= key",
                   context.file, context.doc.node(node).span});
  }

 private:
  static const KeyValue* id_key(const Document& doc, NodeId command) {
    const KeyValue* kv = find_key(doc, first_option(doc, command, Delimiter::bracket), "id");
    if (!kv || trim(kv->value).empty()) return nullptr;
    return kv;
  }
};

// ---------------------------------------------------------------------------

class SymdefHandler final : public ExtensionHandler {
 public:
  std::string id() const override { return "symdef"; }
  std::vector<std::string> handled_command_names() const override { return {"symdef"}; }
  std::vector<std::string> handled_tags() const override {
    return {std::string(tags::symdef_command), std::string(tags::symdef_name)};
  }
  std::vector<HighlightCategory> highlighting_uris() const override {
    return {{std::string(categories::command), "Command"},
            {std::string(categories::symbol_name), "Symbol names"}};
  }

  void add_node_tags(TagContext& context, NodeId command) const override {
    context.add_tag(command, tags::symdef_command);
    NodeId name = first_option(context.document(), command, Delimiter::brace);
    if (name != no_node) context.add_tag_to_words(name, tags::symdef_name);
  }

  std::optional<std::string> syntax_color_uri(std::string_view tag) const override {
    if (tag == tags::symdef_command) return std::string(categories::command);
    if (tag == tags::symdef_name) return std::string(categories::symbol_name);
    return std::nullopt;
  }

  bool index(std::string_view tag, PropertiesAcceptor& properties) const override {
    if (tag != tags::symdef_command) return false;
    const Document& doc = properties.context().doc;
    NodeId command = properties.ast_node();
    std::string name = symbol_name(doc, command);
    if (name.empty()) return false;
    properties.add_resource(vocab::rdf_type, vocab::ide_symbol);
    properties.add_string(vocab::ide_name, name);
    properties.add_integer(vocab::ide_arity, arity(doc, command));
    properties.add_string(vocab::ide_presentation, presentation(doc, command));
    theory_or_root(properties).add_link(vocab::ide_has_symbol, properties);
    return true;
  }

  void validate(std::string_view tag, NodeId node, const ValidationContext& context,
                std::vector<Diagnostic>& out) const override {
    if (tag != tags::symdef_command) return;
    const Document& doc = context.doc;
    const Node& n = doc.node(node);
    if (symbol_name(doc, node).empty()) {
      out.push_back({Severity::warning, std::string(codes::symdef_missing_name), "\\symdef without a symbol name",
                     context.file, n.span});
      return;
    }
    bool in_module = false;
    for (const EnvironmentPair* env : enclosing_environments(doc, n.span.start)) {
      in_module = in_module || env->name == "module";
    }
    if (!in_module) {
      out.push_back({Severity::warning, std::string(codes::symdef_outside_module),
                     "symbol '" + symbol_name(doc, node) + "' is defined outside of any module", context.file,
                     n.span});
    }
  }

  void autocomplete_untagged(const CompletionRequest& request, CompletionAcceptor& acceptor) const override {
    for (auto& s : symbols_in_scope(request.indexer, request.file, request.offset)) {
      acceptor.accept("\\" + s.symbol.name, CompletionKind::macro, std::move(s.definition));
    }
  }

 private:
  static std::string symbol_name(const Document& doc, NodeId command) {
    NodeId opt = first_option(doc, command, Delimiter::brace);
    return opt == no_node ? std::string() : option_text(doc, opt);
  }
  static std::int64_t arity(const Document& doc, NodeId command) {
    NodeId opt = first_option(doc, command, Delimiter::bracket);
    if (opt == no_node) return 0;
    std::string text = option_text(doc, opt);
    if (text.empty() || text.size() > 2 ||
        !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return 0;
    }
    return std::stoll(text);
  }
  static std::string presentation(const Document& doc, NodeId command) {
    bool seen_name = false;
    for (NodeId opt : options_of(doc, command)) {
      if (doc.node(opt).delimiter != Delimiter::brace) continue;
      if (seen_name) return option_text(doc, opt);
      seen_name = true;
    }
    return {};
  }
};

// ---------------------------------------------------------------------------

class DefinitionHandler final : public ExtensionHandler {
 public:
  std::string id() const override { return "definition"; }
  std::vector<std::string> handled_environment_names() const override { return {"definition"}; }
  std::vector<std::string> handled_tags() const override {
    return {std::string(tags::definition_command), std::string(tags::definition_for),
            std::string(tags::definition_text)};
  }
  std::vector<HighlightCategory> highlighting_uris() const override {
    return {{std::string(categories::command), "Command"},
            {std::string(categories::definiendum), "Definienda"}};
  }

  void add_node_tags(TagContext& context, NodeId command) const override {
    const Document& doc = context.document();
    context.add_tag(command, tags::definition_command);
    if (const KeyValue* kv = for_key(doc, command)) {
      for (NodeId v : kv->value_nodes) context.add_tag(v, tags::definition_for);
    }
    if (const EnvironmentPair* pair = pair_of(doc, command)) {
      for (NodeId body : environment_body(doc, *pair)) context.add_tag(body, tags::definition_text);
    }
  }

  std::optional<std::string> syntax_color_uri(std::string_view tag) const override {
    if (tag == tags::definition_command) return std::string(categories::command);
    if (tag == tags::definition_for) return std::string(categories::definiendum);
    return std::nullopt;
  }

  bool index(std::string_view tag, PropertiesAcceptor& properties) const override {
    const Document& doc = properties.context().doc;
    if (tag == tags::definition_command) {
      NodeId command = properties.ast_node();
      properties.add_resource(vocab::rdf_type, vocab::oo_definition);
      std::string text;
      if (const EnvironmentPair* pair = pair_of(doc, command)) {
        auto body = environment_body(doc, *pair);
        text = flatten_words(doc, body);
      }
      properties.add_string(vocab::ide_text, std::move(text));
      NodeId opt = first_option(doc, command, Delimiter::bracket);
      if (const KeyValue* title = find_key(doc, opt, "title")) {
        properties.add_string(vocab::ide_title, std::string(trim(title->value)));
      }
      if (PropertiesAcceptor* theory = nearest_of_type(properties, vocab::oo_theory)) {
        properties.add_link(vocab::oo_part_of, *theory);
      }
      if (const KeyValue* kv = for_key(doc, command)) {
        std::string joined;
        for (const auto& name : split_names(kv->value)) joined += (joined.empty() ? "" : ",") + name;
        properties.add_string(vocab::ide_definiendum, std::move(joined));
      }
      return true;
    }
    if (tag == tags::definition_for) {
      if (PropertiesAcceptor* def = nearest_tagged(properties, tags::definition_command)) {
        if (const KeyValue* kv = for_key(doc, def->ast_node())) {
          for (auto& name : split_names(kv->value)) def->add_string(vocab::ide_for, std::move(name));
        }
      }
    }
    return false;
  }

  void validate(std::string_view tag, NodeId node, const ValidationContext& context,
                std::vector<Diagnostic>& out) const override {
    if (tag != tags::definition_command || for_key(context.doc, node)) return;
    out.push_back({Severity::warning, std::string(codes::definition_missing_for),
                   "definition does not name the symbol it defines (for=)", context.file,
                   context.doc.node(node).span});
  }

 private:
  static const KeyValue* for_key(const Document& doc, NodeId command) {
    const KeyValue* kv = find_key(doc, first_option(doc, command, Delimiter::bracket), "for");
    if (!kv || split_names(kv->value).empty()) return nullptr;
    return kv;
  }
};

}  // namespace

std::shared_ptr<const ExtensionHandler> make_importmodule_handler() { return std::make_shared<ImportModuleHandler>(); }
std::shared_ptr<const ExtensionHandler> make_module_handler() { return std::make_shared<ModuleHandler>(); }
std::shared_ptr<const ExtensionHandler> make_symdef_handler() { return std::make_shared<SymdefHandler>(); }
std::shared_ptr<const ExtensionHandler> make_definition_handler() { return std::make_shared<DefinitionHandler>(); }

Registry standard_registry() {
  Registry registry;
  registry.add(make_module_handler());
  registry.add(make_importmodule_handler());
  registry.add(make_symdef_handler());
  registry.add(make_definition_handler());
  return registry;
}

}  // namespace flexitex
