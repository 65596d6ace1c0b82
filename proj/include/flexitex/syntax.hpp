#pragma once

#include "flexitex/diagnostic.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

enum class TokenKind {
  word,
  command,
  open_brace,
  close_brace,
  open_bracket,
  close_bracket,
  comment,
  math_shift,
  whitespace,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  SourceSpan span;
  std::string_view text;  ///< view into the tokenized source

  /// Command name without the backslash; empty for other kinds.
  std::string_view command_name() const {
    return kind == TokenKind::command ? text.substr(1) : std::string_view{};
  }
};

/// Splits `source` into tokens that partition it exactly. Never fails.
///
/// Words are maximal runs of bytes other than whitespace and `\ { } [ ] % $`.
/// `\` + ASCII letters is a command named by the maximal letter run; `\` + any
/// other code point is a one-symbol command, except `\[` and `\]` which are
/// math shifts like `$`. `%` starts a comment that runs to the end of the line
/// (newline excluded).
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class NodeKind { model, word, command, option, comment, math_shift };
enum class Delimiter { none, brace, bracket };

std::string_view to_string(NodeKind kind);

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

/// One `key=value` entry of a Bracket option. Values are raw source slices.
struct KeyValue {
  std::string key;
  std::string value;
  bool has_value = false;
  SourceSpan key_span;
  SourceSpan value_span;
  std::vector<NodeId> value_nodes;  ///< direct children of the option Model

  bool operator==(const KeyValue&) const = default;
};

/// AST node. Nodes live in Document::nodes in pre-order, so a node's subtree
/// is the id range [id, subtree_end].
struct Node {
  NodeKind kind = NodeKind::model;
  std::string text;            ///< leaf text; for commands the head, e.g. "\symdef"
  std::string name;            ///< command name without backslash
  Delimiter delimiter = Delimiter::none;
  bool closed = true;          ///< option has its closing delimiter
  std::string leading_trivia;  ///< whitespace preceding the node
  std::string trailing_trivia; ///< models only: whitespace before the model ends
  SourceSpan span;
  NodeId parent = no_node;
  NodeId subtree_end = 0;
  std::vector<NodeId> children;
  std::vector<std::string> tags;  ///< sorted, unique; filled by the tagger
  std::vector<KeyValue> key_values;

  bool is_leaf() const {
    return kind == NodeKind::word || kind == NodeKind::comment || kind == NodeKind::math_shift;
  }
  bool has_tag(std::string_view tag) const;
  /// Span of the token that carries this node: the command head for
  /// commands, the full span otherwise.
  SourceSpan head_span() const;

  bool operator==(const Node&) const = default;
};

struct EnvironmentPair {
  std::string name;
  NodeId begin = no_node;
  NodeId end = no_node;  ///< no_node when the \begin is unmatched

  bool operator==(const EnvironmentPair&) const = default;
};

struct Edit {
  SourceSpan span;
  std::string replacement;
};

class SyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed source file. Immutable once built; share through
/// std::shared_ptr<const Document>.
struct Document {
  std::string path;
  std::string source;
  std::vector<Node> nodes;  ///< nodes[0] is the root Model
  std::vector<Diagnostic> diagnostics;
  std::vector<EnvironmentPair> env_pairs;
  std::uint64_t content_hash = 0;

  const Node& root() const { return nodes.front(); }
  const Node& node(NodeId id) const { return nodes.at(id); }
  std::string_view text_of(SourceSpan span) const {
    return std::string_view(source).substr(span.start, span.length());
  }
  std::string_view text_of(NodeId id) const { return text_of(nodes.at(id).span); }

  bool operator==(const Document&) const = default;
};

/// 64-bit FNV-1a digest used for content freshness and node identifiers.
std::uint64_t content_digest(std::string_view bytes);

/// Parses `source` into a total AST, runs environment matching and records
/// all problems as diagnostics. Never throws on any input.
Document parse(std::string source, std::string path = {});

/// Rebuilds the source text from the AST (leaf texts, delimiters, trivia).
std::string reconstruct(const Document& doc);

// ---------------------------------------------------------------------------
// Environments
// ---------------------------------------------------------------------------

struct EnvMarker {
  bool is_begin = true;
  std::uint32_t name = 0;
};

/// Maximum properly nested matching of begin/end markers with equal names.
/// Returns, for each marker, the index of its partner or -1.
std::vector<int> match_markers(std::span<const EnvMarker> markers);

struct EnvironmentMatch {
  std::vector<EnvironmentPair> pairs;
  std::vector<Diagnostic> diagnostics;
};

/// Matches maximally many \begin{x} ... \end{x} pairs of the document.
EnvironmentMatch match_environments(const Document& doc);

/// Environment name of a \begin or \end command node, if it has one.
std::optional<std::string> environment_name(const Document& doc, NodeId command);

// ---------------------------------------------------------------------------
// Editing and lookup
// ---------------------------------------------------------------------------

std::string apply_edit(std::string_view source, const Edit& edit);

/// Equivalent to parse(apply_edit(doc.source, edit), doc.path).
/// Throws SyntaxError when the edit span lies outside the source.
Document reparse(const Document& doc, const Edit& edit);

struct NodeLookup {
  NodeId deepest = 0;               ///< deepest node containing the offset (root if none)
  NodeId preceding_leaf = no_node;  ///< last leaf/command head ending at or before the offset
};

/// Throws SyntaxError when offset > source length.
NodeLookup node_at(const Document& doc, std::size_t offset);

// ---------------------------------------------------------------------------
// AST helpers
// ---------------------------------------------------------------------------

/// Options of a command node, in source order.
std::span<const NodeId> options_of(const Document& doc, NodeId command);
/// First option of `command` with the given delimiter, or no_node.
NodeId first_option(const Document& doc, NodeId command, Delimiter delimiter);
/// The Model inside an option node.
NodeId option_model(const Document& doc, NodeId option);
/// Raw source text between an option's delimiters, trimmed.
std::string option_text(const Document& doc, NodeId option);
/// Looks up a key of a Bracket option node.
const KeyValue* find_key(const Document& doc, NodeId option, std::string_view key);
/// Word leaves in the subtree of `id`, in source order.
std::vector<NodeId> words_in(const Document& doc, NodeId id);
/// Ids of the nodes strictly between a matched environment's \begin and
/// \end whose parent is not itself in that range.
std::vector<NodeId> environment_body(const Document& doc, const EnvironmentPair& pair);
/// Whitespace-normalized concatenation of the Words in the given nodes.
std::string flatten_words(const Document& doc, std::span<const NodeId> ids);

/// Returns the environment pairs enclosing `offset`, outermost first.
std::vector<const EnvironmentPair*> enclosing_environments(const Document& doc, std::size_t offset);

std::string_view trim(std::string_view text);

}  // namespace flexitex
