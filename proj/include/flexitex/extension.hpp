#pragma once

#include "flexitex/diagnostic.hpp"
#include "flexitex/syntax.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

class Indexer;
class Workspace;
class ExtensionHandler;

/// Violation of the handler contract (undeclared tag, tag collision, bad
/// link target, ...). Always a programming error in some handler.
class ExtensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HighlightCategory {
  std::string uri;
  std::string description;
};

/// Category every untagged command falls back to.
inline constexpr std::string_view kCommandCategory = "kwarc.info.mkmide.latex.syntaxhighlighting.command";
inline constexpr std::string_view kExternalRefCategory = "kwarc.info.mkmide.latex.syntaxhighlighting.externalRef";

/// Command name a handler may claim to receive every otherwise unhandled command.
inline constexpr std::string_view kWildcardCommand = "*";

// ---------------------------------------------------------------------------
// Tagging
// ---------------------------------------------------------------------------

class TagContext {
 public:
  TagContext(Document& doc, const ExtensionHandler& handler, std::span<const std::string> declared);

  const Document& document() const { return doc_; }
  /// Throws ExtensionError if the handler did not declare `tag`.
  void add_tag(NodeId node, std::string_view tag);
  /// Tags every Word in the subtree of `node`.
  void add_tag_to_words(NodeId node, std::string_view tag);

 private:
  Document& doc_;
  const ExtensionHandler& handler_;
  std::span<const std::string> declared_;
};

// ---------------------------------------------------------------------------
// Indexing
// ---------------------------------------------------------------------------

struct IndexContext {
  const Document& doc;
  std::string file;
  const Workspace* workspace = nullptr;
};

/// Collects the properties of one index node. Handlers receive the acceptor
/// of the node being indexed and may write to any acceptor on its stack.
class PropertiesAcceptor {
 public:
  virtual ~PropertiesAcceptor() = default;

  virtual void add_integer(std::string_view predicate, std::int64_t value) = 0;
  virtual void add_string(std::string_view predicate, std::string value) = 0;
  virtual void add_link(std::string_view predicate, PropertiesAcceptor& target) = 0;
  virtual void add_resource(std::string_view predicate, std::string iri) = 0;

  /// Acceptors of indexed ancestors, root first, nearest last.
  virtual std::span<PropertiesAcceptor* const> stack() const = 0;
  virtual NodeId ast_node() const = 0;
  virtual const IndexContext& context() const = 0;
  /// True if `rdf:type iri` was added to this acceptor.
  virtual bool has_type(std::string_view iri) const = 0;
};

/// Nearest acceptor on the stack with the given rdf:type, or nullptr.
PropertiesAcceptor* nearest_of_type(const PropertiesAcceptor& acceptor, std::string_view type);
/// Nearest acceptor on the stack whose AST node carries `tag`, or nullptr.
PropertiesAcceptor* nearest_tagged(const PropertiesAcceptor& acceptor, std::string_view tag);

// ---------------------------------------------------------------------------
// Validation and completion
// ---------------------------------------------------------------------------

struct ValidationContext {
  Indexer& indexer;
  const Document& doc;
  const std::string& file;
};

enum class CompletionKind { file, module_id, macro, snippet };

std::string_view to_string(CompletionKind kind);

struct CompletionItem {
  std::string label;
  CompletionKind kind = CompletionKind::macro;
  std::optional<std::string> detail;
  std::string source;  ///< id of the handler that proposed it

  bool operator==(const CompletionItem&) const = default;
};

struct CompletionRequest {
  Indexer& indexer;
  const Document& doc;
  const std::string& file;
  std::size_t offset;
  NodeId node;  ///< the leaf completion was requested on, or no_node
  std::string prefix;
};

class CompletionAcceptor {
 public:
  explicit CompletionAcceptor(std::string source) : source_(std::move(source)) {}

  void accept(std::string label, CompletionKind kind, std::optional<std::string> detail = {});
  std::vector<CompletionItem>& items() { return items_; }

 private:
  std::string source_;
  std::vector<CompletionItem> items_;
};

struct RefactorResult {
  bool supported = false;
  std::string message = "unsupported";
};

// ---------------------------------------------------------------------------
// Handler interface
// ---------------------------------------------------------------------------

class ExtensionHandler {
 public:
  virtual ~ExtensionHandler() = default;

  virtual std::string id() const = 0;
  virtual std::vector<std::string> handled_command_names() const { return {}; }
  /// Environments X whose `\begin{X}` commands this handler receives.
  virtual std::vector<std::string> handled_environment_names() const { return {}; }
  virtual std::vector<std::string> handled_tags() const = 0;
  virtual std::vector<HighlightCategory> highlighting_uris() const { return {}; }

  virtual void add_node_tags(TagContext& context, NodeId command) const = 0;
  virtual std::optional<std::string> syntax_color_uri(std::string_view tag) const;
  /// Returns true when a new index node should be created for the node.
  virtual bool index(std::string_view tag, PropertiesAcceptor& properties) const;
  virtual void validate(std::string_view tag, NodeId node, const ValidationContext& context,
                        std::vector<Diagnostic>& out) const;
  virtual void autocomplete_tag(std::string_view tag, const CompletionRequest& request,
                                CompletionAcceptor& acceptor) const;
  /// Suggestions when the cursor is not on any tagged node.
  virtual void autocomplete_untagged(const CompletionRequest& request, CompletionAcceptor& acceptor) const;
  virtual RefactorResult refactor(std::string_view tag, NodeId node) const;
};

}  // namespace flexitex
