#include "flexitex/index.hpp"

#include "flexitex/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <unordered_map>

namespace flexitex {

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string file_hash(const std::string& file, std::string_view content) {
  std::string key = file;
  key.push_back('\0');
  key.append(content);
  return hex16(content_digest(key));
}

class TreeBuilder;

class NodeAcceptor final : public PropertiesAcceptor {
 public:
  NodeAcceptor(TreeBuilder& builder, NodeId node, std::vector<PropertiesAcceptor*> stack)
      : builder_(builder), node_(node), stack_(std::move(stack)) {}

  void add_integer(std::string_view predicate, std::int64_t value) override {
    add(predicate, Term::integer(value));
  }
  void add_string(std::string_view predicate, std::string value) override {
    add(predicate, Term::literal(std::move(value)));
  }
  void add_resource(std::string_view predicate, std::string iri) override;
  void add_link(std::string_view predicate, PropertiesAcceptor& target) override;

  std::span<PropertiesAcceptor* const> stack() const override { return stack_; }
  NodeId ast_node() const override { return node_; }
  const IndexContext& context() const override;
  bool has_type(std::string_view iri) const override { return types_.count(std::string(iri)) > 0; }

  const std::string& iri() const { return iri_; }
  bool minted() const { return !iri_.empty(); }
  std::size_t next_member() { return next_member_++; }

 private:
  friend class TreeBuilder;
  void add(std::string_view predicate, Term object);

  TreeBuilder& builder_;
  NodeId node_;
  std::vector<PropertiesAcceptor*> stack_;
  std::string iri_;
  std::set<std::string> types_;
  std::size_t next_member_ = 1;
};

class TreeBuilder {
 public:
  TreeBuilder(const Document& doc, const Registry& registry, const std::string& file, const Workspace* ws)
      : context_{doc, file, ws}, registry_(registry), hash_(file_hash(file, doc.source)) {}

  IndexedFile run() {
    const Document& doc = context_.doc;
    std::unordered_map<NodeId, NodeId> begin_to_end;
    for (const auto& pair : doc.env_pairs) {
      if (pair.end != no_node) begin_to_end[pair.begin] = pair.end;
    }

    auto& root = make(0, {});
    root.iri_ = "urn:flexitex:node:" + hash_ + ":root";
    used_iris_.insert(root.iri_);
    emit(root.iri_, vocab::rdf_type, Term::iri(vocab::rdf_seq));
    emit(root.iri_, vocab::rdf_type, Term::iri(vocab::ide_document));
    emit(root.iri_, vocab::ide_file, Term::literal(context_.file));
    root.types_ = {vocab::rdf_seq, vocab::ide_document};
    active_.push_back({&root, std::numeric_limits<NodeId>::max()});

    for (NodeId id = 1; id < doc.nodes.size(); ++id) {
      // Ancestors whose scope ended; an environment may outlive the group
      // it was opened in, so removal is not necessarily from the top.
      std::erase_if(active_, [&](const Active& a) { return a.scope_end < id; });
      const Node& node = doc.nodes[id];
      if (node.tags.empty()) continue;

      std::vector<PropertiesAcceptor*> stack;
      for (const auto& a : active_) stack.push_back(a.acceptor);
      NodeAcceptor& current = make(id, std::move(stack));
      current_ = &current;
      bool wanted = false;
      for (const auto& tag : node.tags) {
        const ExtensionHandler& handler = registry_.handler_for_tag(tag);
        current_handler_ = &handler;
        if (handler.index(tag, current)) wanted = true;
      }
      current_ = nullptr;

      if (wanted) {
        NodeAcceptor& parent = *active_.back().acceptor;
        current.iri_ = mint(node.span.start);
        emit(parent.iri_, vocab::rdf_member(parent.next_member()), Term::iri(current.iri_));
        emit(current.iri_, vocab::rdf_type, Term::iri(vocab::rdf_seq));
        current.types_.insert(vocab::rdf_seq);
        std::size_t end = node.span.end;
        NodeId scope_end = node.subtree_end;
        if (auto it = begin_to_end.find(id); it != begin_to_end.end()) {
          end = doc.nodes[it->second].span.end;
          scope_end = doc.nodes[it->second].subtree_end;
        }
        emit(current.iri_, vocab::ide_start, Term::integer(static_cast<std::int64_t>(node.span.start)));
        emit(current.iri_, vocab::ide_end, Term::integer(static_cast<std::int64_t>(end)));
        active_.push_back({&current, scope_end});
      }
      for (auto& p : pending_) {
        const std::string& subject = p.subject->iri_;
        std::string object_iri = p.target ? p.target->iri_ : std::string();
        if (subject.empty() || (p.target && object_iri.empty())) {
          throw ExtensionError("handler '" + p.handler + "' added '" + p.predicate +
                               "' involving a node it did not index");
        }
        emit(subject, p.predicate, p.target ? Term::iri(object_iri) : p.object);
      }
      pending_.clear();
    }
    return {root.iri_, std::move(triples_)};
  }

  void add(NodeAcceptor& subject, std::string_view predicate, Term object, NodeAcceptor* target) {
    check_reachable(subject);
    if (target) check_reachable(*target);
    if (predicate == vocab::rdf_type && object.is_iri()) subject.types_.insert(object.value);
    if (&subject == current_ || target == current_) {
      pending_.push_back({&subject, std::string(predicate), std::move(object), target,
                          current_handler_ ? current_handler_->id() : std::string()});
      return;
    }
    emit(subject.iri_, std::string(predicate), target ? Term::iri(target->iri_) : std::move(object));
  }

  const IndexContext& context() const { return context_; }

 private:
  struct Active {
    NodeAcceptor* acceptor;
    NodeId scope_end;
  };
  struct Pending {
    NodeAcceptor* subject;
    std::string predicate;
    Term object;
    NodeAcceptor* target;
    std::string handler;
  };

  NodeAcceptor& make(NodeId id, std::vector<PropertiesAcceptor*> stack) {
    acceptors_.push_back(std::make_unique<NodeAcceptor>(*this, id, std::move(stack)));
    return *acceptors_.back();
  }

  void check_reachable(const NodeAcceptor& a) const {
    if (!current_) throw ExtensionError("properties may only be added while a node is being indexed");
    if (&a == current_) return;
    for (PropertiesAcceptor* s : current_->stack()) {
      if (s == &a) return;
    }
    throw ExtensionError("handler '" + (current_handler_ ? current_handler_->id() : std::string()) +
                         "' used an acceptor that is not on its stack");
  }

  std::string mint(std::size_t start) {
    std::string base = "urn:flexitex:node:" + hash_ + ":" + std::to_string(start);
    std::string iri = base;
    for (int k = 1; used_iris_.count(iri); ++k) iri = base + "." + std::to_string(k);
    used_iris_.insert(iri);
    return iri;
  }

  void emit(const std::string& subject, const std::string& predicate, Term object) {
    triples_.push_back({Term::iri(subject), Term::iri(predicate), std::move(object)});
  }

  IndexContext context_;
  const Registry& registry_;
  std::string hash_;
  std::vector<std::unique_ptr<NodeAcceptor>> acceptors_;
  std::vector<Active> active_;
  std::vector<Pending> pending_;
  std::vector<Triple> triples_;
  std::set<std::string> used_iris_;
  NodeAcceptor* current_ = nullptr;
  const ExtensionHandler* current_handler_ = nullptr;
};

void NodeAcceptor::add(std::string_view predicate, Term object) {
  builder_.add(*this, predicate, std::move(object), nullptr);
}

void NodeAcceptor::add_resource(std::string_view predicate, std::string iri) {
  builder_.add(*this, predicate, Term::iri(std::move(iri)), nullptr);
}

void NodeAcceptor::add_link(std::string_view predicate, PropertiesAcceptor& target) {
  auto* node = dynamic_cast<NodeAcceptor*>(&target);
  if (!node || &node->builder_ != &builder_) throw ExtensionError("link target belongs to another index");
  builder_.add(*this, predicate, Term{}, node);
}

const IndexContext& NodeAcceptor::context() const { return builder_.context(); }

}  // namespace

std::string root_iri(const std::string& file, std::string_view content) {
  return "urn:flexitex:node:" + file_hash(file, content) + ":root";
}

IndexedFile index_document(const Document& tagged, const Registry& registry, const std::string& file,
                           const Workspace* workspace) {
  return TreeBuilder(tagged, registry, file, workspace).run();
}

void build_index(Store& store, const std::string& file, const Document& tagged, const Registry& registry,
                 const Workspace* workspace) {
  IndexedFile indexed = index_document(tagged, registry, file, workspace);
  store.replace_file(file, indexed.triples, indexed.root, content_digest(tagged.source));
}

// ---------------------------------------------------------------------------

Indexer::Indexer(Workspace& workspace, const Registry& registry) : workspace_(workspace), registry_(registry) {}

std::shared_ptr<const Document> Indexer::document(const std::string& file) {
  const std::string& text = workspace_.content(file);
  std::uint64_t digest = workspace_.digest(file);
  auto& cached = documents_[file];
  if (!cached.doc || cached.digest != digest) {
    cached.doc = std::make_shared<const Document>(tag_document(registry_, parse(text, file)));
    cached.digest = digest;
  }
  return cached.doc;
}

const std::string& Indexer::get_index(const std::string& file) {
  std::uint64_t digest = workspace_.digest(file);
  if (auto stored = store_.digest(file); stored && *stored == digest) return *store_.root(file);
  auto doc = document(file);
  build_index(store_, file, *doc, registry_, &workspace_);
  ++rebuilds_;
  return *store_.root(file);
}

void Indexer::refresh_all() {
  auto files = workspace_.files();
  for (const auto& f : files) get_index(f);
  std::vector<std::string> stale;
  for (const auto& [file, entry] : store_.files()) {
    if (!std::binary_search(files.begin(), files.end(), file) && !workspace_.exists(file)) stale.push_back(file);
  }
  for (const auto& f : stale) {
    store_.remove_file(f);
    documents_.erase(f);
  }
}

QueryResult Indexer::query(std::string_view text) const { return evaluate(store_, parse_query(text)); }

std::vector<std::string> Indexer::module_ids(const std::string& file) {
  const std::string root = get_index(file);
  Query q = parse_query("?y rdf:type oo:Theory; ?y rdf:id ?moduleId");
  q.patterns.insert(q.patterns.begin(),
                    TriplePattern{{PatternTerm{std::nullopt, Term::iri(root)},
                                   PatternTerm{std::nullopt, Term::iri(vocab::ide_has_module)},
                                   PatternTerm{"y", {}}}});
  std::vector<std::string> ids;
  for (const auto& row : evaluate(store_, q).rows) {
    if (store_.object(row[0], vocab::ide_anonymous)) continue;
    ids.push_back(row[1].value);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace flexitex
