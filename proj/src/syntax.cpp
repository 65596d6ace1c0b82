#include "flexitex/syntax.hpp"

#include <algorithm>
#include <cstring>

namespace flexitex {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::command: return "command";
    case TokenKind::open_brace: return "open-brace";
    case TokenKind::close_brace: return "close-brace";
    case TokenKind::open_bracket: return "open-bracket";
    case TokenKind::close_bracket: return "close-bracket";
    case TokenKind::comment: return "comment";
    case TokenKind::math_shift: return "math-shift";
    case TokenKind::whitespace: return "whitespace";
  }
  return "word";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::model: return "Model";
    case NodeKind::word: return "Word";
    case NodeKind::command: return "Command";
    case NodeKind::option: return "Option";
    case NodeKind::comment: return "Comment";
    case NodeKind::math_shift: return "MathShift";
  }
  return "Model";
}

bool Node::has_tag(std::string_view tag) const {
  return std::binary_search(tags.begin(), tags.end(), tag);
}

SourceSpan Node::head_span() const {
  if (kind == NodeKind::command) return {span.start, span.start + text.size()};
  return span;
}

std::uint64_t content_digest(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_word_byte(char c) {
  if (is_space(c)) return false;
  switch (c) {
    case '\\': case '{': case '}': case '[': case ']': case '%': case '$':
      return false;
    default:
      return true;
  }
}

/// Length of the UTF-8 code point starting at `pos`, or 1 for invalid bytes.
std::size_t code_point_length(std::string_view s, std::size_t pos) {
  auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  if (lead >= 0xC2 && lead <= 0xDF) len = 2;
  else if (lead >= 0xE0 && lead <= 0xEF) len = 3;
  else if (lead >= 0xF0 && lead <= 0xF4) len = 4;
  if (pos + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k) {
    if ((static_cast<unsigned char>(s[pos + k]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  const std::size_t n = source.size();
  auto emit = [&](TokenKind kind, std::size_t end) {
    tokens.push_back({kind, {pos, end}, source.substr(pos, end - pos)});
    pos = end;
  };
  while (pos < n) {
    char c = source[pos];
    if (is_space(c)) {
      std::size_t end = pos + 1;
      while (end < n && is_space(source[end])) ++end;
      emit(TokenKind::whitespace, end);
      continue;
    }
    switch (c) {
      case '\\': {
        if (pos + 1 >= n) {
          emit(TokenKind::command, pos + 1);
        } else if (is_letter(source[pos + 1])) {
          std::size_t end = pos + 2;
          while (end < n && is_letter(source[end])) ++end;
          emit(TokenKind::command, end);
        } else if (source[pos + 1] == '[' || source[pos + 1] == ']') {
          emit(TokenKind::math_shift, pos + 2);
        } else {
          emit(TokenKind::command, pos + 1 + code_point_length(source, pos + 1));
        }
        break;
      }
      case '{': emit(TokenKind::open_brace, pos + 1); break;
      case '}': emit(TokenKind::close_brace, pos + 1); break;
      case '[': emit(TokenKind::open_bracket, pos + 1); break;
      case ']': emit(TokenKind::close_bracket, pos + 1); break;
      case '$': emit(TokenKind::math_shift, pos + 1); break;
      case '%': {
        auto end = source.find('\n', pos);
        emit(TokenKind::comment, end == std::string_view::npos ? n : end);
        break;
      }
      default: {
        std::size_t end = pos + 1;
        while (end < n && is_word_byte(source[end])) ++end;
        emit(TokenKind::word, end);
        break;
      }
    }
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(Document& doc) : doc_(doc), source_(doc.source), tokens_(tokenize(source_)) {}

  void run() {
    Node root;
    root.kind = NodeKind::model;
    root.span = {0, source_.size()};
    doc_.nodes.push_back(std::move(root));
    frames_.push_back(Frame{.node = 0});

    std::size_t i = 0;
    while (i < tokens_.size()) {
      if (frames_.back().is_command) {
        i = bind_or_finish_command(i);
        continue;
      }
      handle(tokens_[i]);
      ++i;
    }
    while (frames_.size() > 1) {
      if (frames_.back().is_command) {
        finish_command();
      } else {
        close_option(source_.size(), /*closed=*/false);
      }
    }
    Frame& top = frames_.back();
    doc_.nodes[0].trailing_trivia = std::move(top.pending_trivia);
    doc_.nodes[0].subtree_end = last_id();
  }

 private:
  struct Frame {
    NodeId node = 0;            ///< Model node (or Command node for command frames)
    bool is_command = false;
    Delimiter terminator = Delimiter::none;
    bool split_key_values = false;
    int plain_brackets = 0;
    std::string pending_trivia{};
  };

  NodeId last_id() const { return static_cast<NodeId>(doc_.nodes.size() - 1); }

  Frame& model_frame() {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      if (!it->is_command) return *it;
    }
    return frames_.front();
  }

  NodeId add_node(Node node, NodeId parent) {
    node.parent = parent;
    auto id = static_cast<NodeId>(doc_.nodes.size());
    node.subtree_end = id;
    doc_.nodes.push_back(std::move(node));
    doc_.nodes[parent].children.push_back(id);
    return id;
  }

  NodeId add_to_model(Node node) {
    Frame& frame = model_frame();
    node.leading_trivia = std::move(frame.pending_trivia);
    frame.pending_trivia.clear();
    return add_node(std::move(node), frame.node);
  }

  void add_leaf(NodeKind kind, const Token& token) {
    Node node;
    node.kind = kind;
    node.text = std::string(token.text);
    node.span = token.span;
    add_to_model(std::move(node));
  }

  void add_word(const Token& token) {
    if (!model_frame().split_key_values) {
      add_leaf(NodeKind::word, token);
      return;
    }
    // Key-value separators become words of their own.
    std::size_t begin = 0;
    auto text = token.text;
    for (std::size_t k = 0; k <= text.size(); ++k) {
      bool sep = k < text.size() && (text[k] == ',' || text[k] == '=');
      if (k == text.size() || sep) {
        if (k > begin) {
          add_leaf(NodeKind::word, Token{TokenKind::word,
                                         {token.span.start + begin, token.span.start + k},
                                         text.substr(begin, k - begin)});
        }
        if (sep) {
          add_leaf(NodeKind::word, Token{TokenKind::word,
                                         {token.span.start + k, token.span.start + k + 1},
                                         text.substr(k, 1)});
        }
        begin = k + 1;
      }
    }
  }

  void diagnose(Severity severity, std::string_view code, std::string message, SourceSpan span) {
    doc_.diagnostics.push_back(
        Diagnostic{severity, std::string(code), std::move(message), doc_.path, span});
  }

  /// Opens an option; `parent` is a command or the current model.
  void open_option(const Token& token, NodeId parent, std::string leading) {
    Node option;
    option.kind = NodeKind::option;
    option.delimiter = token.kind == TokenKind::open_brace ? Delimiter::brace : Delimiter::bracket;
    option.span = {token.span.start, token.span.end};
    option.leading_trivia = std::move(leading);
    NodeId option_id = add_node(std::move(option), parent);

    Node model;
    model.kind = NodeKind::model;
    model.span = {token.span.end, token.span.end};
    NodeId model_id = add_node(std::move(model), option_id);

    Frame frame;
    frame.node = model_id;
    frame.terminator = doc_.nodes[option_id].delimiter;
    frame.split_key_values = frame.terminator == Delimiter::bracket;
    frames_.push_back(std::move(frame));
  }

  /// Closes the innermost open option at `end` (exclusive end of the close
  /// delimiter, or end of input when unclosed).
  void close_option(std::size_t end, bool closed) {
    Frame frame = std::move(frames_.back());
    frames_.pop_back();
    NodeId model_id = frame.node;
    NodeId option_id = doc_.nodes[model_id].parent;
    Node& model = doc_.nodes[model_id];
    model.trailing_trivia = std::move(frame.pending_trivia);
    model.span.end = closed ? end - 1 : end;
    model.subtree_end = last_id();
    Node& option = doc_.nodes[option_id];
    option.closed = closed;
    option.span.end = end;
    option.subtree_end = last_id();
    if (!closed) {
      diagnose(Severity::error, codes::unclosed_group,
               option.delimiter == Delimiter::brace ? "unclosed '{' is closed at end of input"
                                                    : "unclosed '[' is closed at end of input",
               {option.span.start, option.span.start + 1});
    }
    if (option.delimiter == Delimiter::bracket) compute_key_values(option_id);
  }

  void compute_key_values(NodeId option_id) {
    NodeId model_id = doc_.nodes[option_id].children.front();
    const auto& children = doc_.nodes[model_id].children;
    std::vector<KeyValue> entries;
    auto is_word = [&](NodeId id, char c) {
      const Node& n = doc_.nodes[id];
      return n.kind == NodeKind::word && n.text.size() == 1 && n.text[0] == c;
    };
    auto slice = [&](std::span<const NodeId> ids) -> std::pair<std::string, SourceSpan> {
      if (ids.empty()) return {};
      SourceSpan span{doc_.nodes[ids.front()].span.start, doc_.nodes[ids.back()].span.end};
      return {std::string(trim(std::string_view(source_).substr(span.start, span.length()))),
              span};
    };
    std::size_t seg_begin = 0;
    for (std::size_t k = 0; k <= children.size(); ++k) {
      if (k < children.size() && !is_word(children[k], ',')) continue;
      std::span<const NodeId> segment(children.data() + seg_begin, k - seg_begin);
      seg_begin = k + 1;
      if (segment.empty()) continue;
      KeyValue kv;
      auto eq = std::find_if(segment.begin(), segment.end(),
                             [&](NodeId id) { return is_word(id, '='); });
      auto key_ids = segment.subspan(0, static_cast<std::size_t>(eq - segment.begin()));
      std::tie(kv.key, kv.key_span) = slice(key_ids);
      if (eq != segment.end()) {
        kv.has_value = true;
        auto value_ids = segment.subspan(static_cast<std::size_t>(eq - segment.begin()) + 1);
        std::tie(kv.value, kv.value_span) = slice(value_ids);
        if (value_ids.empty()) kv.value_span = {doc_.nodes[*eq].span.end, doc_.nodes[*eq].span.end};
        kv.value_nodes.assign(value_ids.begin(), value_ids.end());
      }
      if (kv.key.empty() && !kv.has_value) continue;
      entries.push_back(std::move(kv));
    }
    doc_.nodes[option_id].key_values = std::move(entries);
  }

  void finish_command() {
    NodeId id = frames_.back().node;
    frames_.pop_back();
    Node& cmd = doc_.nodes[id];
    if (!cmd.children.empty()) cmd.span.end = doc_.nodes[cmd.children.back()].span.end;
    cmd.subtree_end = last_id();
  }

  /// With a command frame on top: binds the next option to it, or closes it.
  std::size_t bind_or_finish_command(std::size_t i) {
    std::size_t j = i;
    std::string_view ws;
    if (j < tokens_.size() && tokens_[j].kind == TokenKind::whitespace) {
      ws = tokens_[j].text;
      ++j;
    }
    if (j < tokens_.size()) {
      auto newlines = std::count(ws.begin(), ws.end(), '\n');
      const Token& next = tokens_[j];
      bool binds = (next.kind == TokenKind::open_brace && newlines == 0) ||
                   (next.kind == TokenKind::open_bracket && newlines <= 1);
      if (binds) {
        open_option(next, frames_.back().node, std::string(ws));
        return j + 1;
      }
    }
    finish_command();
    return i;
  }

  void handle(const Token& token) {
    switch (token.kind) {
      case TokenKind::whitespace:
        model_frame().pending_trivia += token.text;
        break;
      case TokenKind::word:
        add_word(token);
        break;
      case TokenKind::comment:
        add_leaf(NodeKind::comment, token);
        break;
      case TokenKind::math_shift:
        add_leaf(NodeKind::math_shift, token);
        break;
      case TokenKind::command: {
        Node cmd;
        cmd.kind = NodeKind::command;
        cmd.text = std::string(token.text);
        cmd.name = std::string(token.command_name());
        cmd.span = token.span;
        NodeId id = add_to_model(std::move(cmd));
        frames_.push_back(Frame{.node = id, .is_command = true});
        break;
      }
      case TokenKind::open_brace: {
        Frame& frame = model_frame();
        std::string leading = std::move(frame.pending_trivia);
        frame.pending_trivia.clear();
        open_option(token, frame.node, std::move(leading));
        break;
      }
      case TokenKind::open_bracket:
        ++model_frame().plain_brackets;
        add_leaf(NodeKind::word, token);
        break;
      case TokenKind::close_brace:
        handle_close_brace(token);
        break;
      case TokenKind::close_bracket:
        handle_close_bracket(token);
        break;
    }
  }

  void handle_close_brace(const Token& token) {
    // Find the nearest brace-terminated model; brackets in between are
    // closed implicitly.
    auto brace = std::find_if(frames_.rbegin(), frames_.rend(), [](const Frame& f) {
      return !f.is_command && f.terminator == Delimiter::brace;
    });
    if (brace == frames_.rend()) {
      add_leaf(NodeKind::word, token);
      diagnose(Severity::error, codes::unbalanced_brace, "unmatched '}'", token.span);
      return;
    }
    while (true) {
      Frame& top = frames_.back();
      if (top.is_command) {
        finish_command();
        continue;
      }
      if (top.terminator == Delimiter::brace) {
        close_option(token.span.end, true);
        return;
      }
      close_option(token.span.start, false);
    }
  }

  void handle_close_bracket(const Token& token) {
    Frame& frame = model_frame();
    if (frame.terminator == Delimiter::bracket) {
      while (frames_.back().is_command) finish_command();
      close_option(token.span.end, true);
      return;
    }
    if (frame.plain_brackets > 0) {
      --frame.plain_brackets;
      add_leaf(NodeKind::word, token);
      return;
    }
    add_leaf(NodeKind::word, token);
    diagnose(Severity::warning, codes::unbalanced_bracket, "unmatched ']'", token.span);
  }

  Document& doc_;
  std::string_view source_;
  std::vector<Token> tokens_;
  std::vector<Frame> frames_;
};

}  // namespace

Document parse(std::string source, std::string path) {
  Document doc;
  doc.path = std::move(path);
  doc.source = std::move(source);
  doc.content_hash = content_digest(doc.source);
  Parser(doc).run();
  auto envs = match_environments(doc);
  doc.env_pairs = std::move(envs.pairs);
  doc.diagnostics.insert(doc.diagnostics.end(), envs.diagnostics.begin(), envs.diagnostics.end());
  sort_unique(doc.diagnostics);
  return doc;
}

std::string reconstruct(const Document& doc) {
  std::string out;
  out.reserve(doc.source.size());
  struct Item {
    NodeId id;
    bool closing;
  };
  std::vector<Item> stack{{0, false}};
  while (!stack.empty()) {
    Item item = stack.back();
    stack.pop_back();
    const Node& node = doc.nodes[item.id];
    if (item.closing) {
      if (node.kind == NodeKind::model) {
        out += node.trailing_trivia;
      } else if (node.closed) {
        out += node.delimiter == Delimiter::brace ? '}' : ']';
      }
      continue;
    }
    out += node.leading_trivia;
    switch (node.kind) {
      case NodeKind::word:
      case NodeKind::comment:
      case NodeKind::math_shift:
        out += node.text;
        break;
      case NodeKind::command:
        out += node.text;
        for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
          stack.push_back({*it, false});
        }
        break;
      case NodeKind::option:
        out += node.delimiter == Delimiter::brace ? '{' : '[';
        stack.push_back({item.id, true});
        stack.push_back({node.children.front(), false});
        break;
      case NodeKind::model:
        stack.push_back({item.id, true});
        for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
          stack.push_back({*it, false});
        }
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Editing
// ---------------------------------------------------------------------------

namespace {

void check_edit(std::string_view source, const Edit& edit) {
  if (edit.span.start > edit.span.end || edit.span.end > source.size()) {
    throw SyntaxError("edit span [" + std::to_string(edit.span.start) + ", " +
                      std::to_string(edit.span.end) + ") outside source of length " +
                      std::to_string(source.size()));
  }
}

/// Finds a Word the edit stays strictly inside of, such that the edited text
/// is still one Word with the same surroundings. Returns no_node otherwise.
NodeId patchable_word(const Document& doc, const Edit& edit) {
  for (char c : edit.replacement) {
    if (!is_word_byte(c)) return no_node;
  }
  NodeId found = no_node;
  for (NodeId id = 0; id < doc.nodes.size(); ++id) {
    const Node& n = doc.nodes[id];
    if (n.kind == NodeKind::word && n.span.start < edit.span.start &&
        edit.span.end <= n.span.end) {
      found = id;
      break;
    }
    if (n.span.start > edit.span.start) break;
  }
  if (found == no_node) return no_node;
  for (char c : doc.nodes[found].text) {
    if (!is_word_byte(c)) return no_node;
  }
  for (NodeId up = doc.nodes[found].parent; up != no_node; up = doc.nodes[up].parent) {
    const Node& a = doc.nodes[up];
    if (a.kind == NodeKind::option && a.delimiter == Delimiter::bracket) return no_node;
    if (a.kind == NodeKind::command && (a.name == "begin" || a.name == "end")) return no_node;
  }
  return found;
}

}  // namespace

std::string apply_edit(std::string_view source, const Edit& edit) {
  check_edit(source, edit);
  std::string out;
  out.reserve(source.size() + edit.replacement.size());
  out.append(source.substr(0, edit.span.start));
  out.append(edit.replacement);
  out.append(source.substr(edit.span.end));
  return out;
}

Document reparse(const Document& doc, const Edit& edit) {
  std::string edited = apply_edit(doc.source, edit);
  NodeId word = patchable_word(doc, edit);
  if (word == no_node) return parse(std::move(edited), doc.path);

  // Typing inside a word: patch the leaf and shift everything after it.
  const auto delta = static_cast<std::ptrdiff_t>(edit.replacement.size()) -
                     static_cast<std::ptrdiff_t>(edit.span.length());
  auto shift = [&](std::size_t& pos) {
    if (pos >= edit.span.end) pos = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pos) + delta);
  };
  auto shift_span = [&](SourceSpan& span) {
    shift(span.start);
    shift(span.end);
  };
  Document out = doc;
  out.source = std::move(edited);
  out.content_hash = content_digest(out.source);
  for (Node& n : out.nodes) {
    shift_span(n.span);
    for (KeyValue& kv : n.key_values) {
      shift_span(kv.key_span);
      shift_span(kv.value_span);
    }
  }
  for (Diagnostic& d : out.diagnostics) shift_span(d.span);
  Node& w = out.nodes[word];
  w.text = out.source.substr(w.span.start, w.span.length());
  return out;
}

// ---------------------------------------------------------------------------
// Lookup
// ---------------------------------------------------------------------------

namespace {

NodeId last_leaf_before(const Document& doc, NodeId id, std::size_t offset) {
  const Node& node = doc.nodes[id];
  if (node.span.start > offset) return no_node;
  switch (node.kind) {
    case NodeKind::word:
    case NodeKind::comment:
    case NodeKind::math_shift:
      return node.span.end <= offset && node.span.length() > 0 ? id : no_node;
    case NodeKind::command: {
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
        NodeId found = last_leaf_before(doc, *it, offset);
        if (found != no_node) return found;
      }
      return node.head_span().end <= offset ? id : no_node;
    }
    case NodeKind::option:
      return last_leaf_before(doc, node.children.front(), offset);
    case NodeKind::model: {
      const auto& kids = node.children;
      auto it = std::partition_point(kids.begin(), kids.end(), [&](NodeId k) {
        return doc.nodes[k].span.start < offset;
      });
      while (it != kids.begin()) {
        --it;
        NodeId found = last_leaf_before(doc, *it, offset);
        if (found != no_node) return found;
      }
      return no_node;
    }
  }
  return no_node;
}

}  // namespace

NodeLookup node_at(const Document& doc, std::size_t offset) {
  if (offset > doc.source.size()) {
    throw SyntaxError("offset " + std::to_string(offset) + " outside source of length " +
                      std::to_string(doc.source.size()));
  }
  NodeLookup result;
  NodeId current = 0;
  while (true) {
    const auto& kids = doc.nodes[current].children;
    auto it = std::partition_point(kids.begin(), kids.end(), [&](NodeId k) {
      return doc.nodes[k].span.end <= offset;
    });
    if (it == kids.end() || !doc.nodes[*it].span.contains(offset)) break;
    current = *it;
  }
  result.deepest = current;
  result.preceding_leaf = last_leaf_before(doc, 0, offset);
  return result;
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

std::span<const NodeId> options_of(const Document& doc, NodeId command) {
  const Node& n = doc.nodes.at(command);
  if (n.kind != NodeKind::command) return {};
  return n.children;
}

NodeId first_option(const Document& doc, NodeId command, Delimiter delimiter) {
  for (NodeId opt : options_of(doc, command)) {
    if (doc.nodes[opt].delimiter == delimiter) return opt;
  }
  return no_node;
}

NodeId option_model(const Document& doc, NodeId option) {
  return doc.nodes.at(option).children.front();
}

std::string option_text(const Document& doc, NodeId option) {
  return std::string(trim(doc.text_of(option_model(doc, option))));
}

const KeyValue* find_key(const Document& doc, NodeId option, std::string_view key) {
  if (option == no_node) return nullptr;
  for (const KeyValue& kv : doc.nodes.at(option).key_values) {
    if (kv.key == key) return &kv;
  }
  return nullptr;
}

std::vector<NodeId> words_in(const Document& doc, NodeId id) {
  std::vector<NodeId> out;
  const Node& n = doc.nodes.at(id);
  for (NodeId k = id; k <= n.subtree_end; ++k) {
    if (doc.nodes[k].kind == NodeKind::word) out.push_back(k);
  }
  return out;
}

std::vector<NodeId> environment_body(const Document& doc, const EnvironmentPair& pair) {
  std::vector<NodeId> out;
  if (pair.end == no_node) return out;
  const std::size_t lo = doc.nodes[pair.begin].span.end;
  const std::size_t hi = doc.nodes[pair.end].span.start;
  auto inside = [&](NodeId id) {
    const Node& n = doc.nodes[id];
    return n.span.start >= lo && n.span.end <= hi && n.kind != NodeKind::model;
  };
  // Pre-order: the first contained node met on each path is maximal.
  for (NodeId id = doc.nodes[pair.begin].subtree_end + 1; id < pair.end; ++id) {
    if (!inside(id)) continue;
    out.push_back(id);
    id = doc.nodes[id].subtree_end;
  }
  return out;
}

std::string flatten_words(const Document& doc, std::span<const NodeId> ids) {
  std::string out;
  for (NodeId id : ids) {
    for (NodeId w : words_in(doc, id)) {
      if (!out.empty()) out += ' ';
      out += doc.nodes[w].text;
    }
  }
  return out;
}

std::vector<const EnvironmentPair*> enclosing_environments(const Document& doc, std::size_t offset) {
  std::vector<const EnvironmentPair*> out;
  for (const EnvironmentPair& pair : doc.env_pairs) {
    if (pair.end == no_node) continue;
    if (doc.nodes[pair.begin].span.end <= offset && offset <= doc.nodes[pair.end].span.start) {
      out.push_back(&pair);
    }
  }
  std::sort(out.begin(), out.end(), [&](const EnvironmentPair* a, const EnvironmentPair* b) {
    return doc.nodes[a->begin].span.start < doc.nodes[b->begin].span.start;
  });
  return out;
}

}  // namespace flexitex
