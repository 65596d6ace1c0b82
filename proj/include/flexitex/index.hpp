#pragma once

#include "flexitex/query.hpp"
#include "flexitex/registry.hpp"
#include "flexitex/store.hpp"
#include "flexitex/syntax.hpp"
#include "flexitex/workspace.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace flexitex {

struct IndexedFile {
  std::string root;  ///< root node IRI
  std::vector<Triple> triples;
};

/// IRI of the root index node of `file` with the given content digest.
std::string root_iri(const std::string& file, std::string_view content);

/// Walks a tagged document and collects its index tree: one node per AST
/// node some handler asked to index, attached to the nearest indexed
/// ancestor as the next rdf:_n member. A `\begin` node stays an ancestor
/// until its matching `\end`. Throws ExtensionError when a handler links to
/// a node that is neither on its stack nor itself indexed.
IndexedFile index_document(const Document& tagged, const Registry& registry, const std::string& file,
                           const Workspace* workspace = nullptr);

/// index_document + Store::replace_file.
void build_index(Store& store, const std::string& file, const Document& tagged, const Registry& registry,
                 const Workspace* workspace = nullptr);

/// Keeps parsed documents and the triple store in sync with a workspace.
/// Not thread-safe; callers serialize access.
class Indexer {
 public:
  Indexer(Workspace& workspace, const Registry& registry);

  Workspace& workspace() { return workspace_; }
  const Workspace& workspace() const { return workspace_; }
  const Registry& registry() const { return registry_; }
  Store& store() { return store_; }
  const Store& store() const { return store_; }

  /// Parsed and tagged document for the current content of `file`.
  /// Throws WorkspaceError if it cannot be read.
  std::shared_ptr<const Document> document(const std::string& file);

  /// Root IRI of `file`'s index, rebuilding only when the content changed.
  const std::string& get_index(const std::string& file);

  /// get_index for every workspace file; drops files that disappeared.
  void refresh_all();

  /// Number of index rebuilds performed so far.
  std::size_t rebuild_count() const { return rebuilds_; }

  /// Evaluates a query over the current store (no refresh).
  QueryResult query(std::string_view text) const;

  /// Ids of the modules `file` declares, via the index.
  std::vector<std::string> module_ids(const std::string& file);

 private:
  struct CachedDocument {
    std::uint64_t digest = 0;
    std::shared_ptr<const Document> doc;
  };

  Workspace& workspace_;
  const Registry& registry_;
  Store store_;
  std::map<std::string, CachedDocument> documents_;
  std::size_t rebuilds_ = 0;
};

}  // namespace flexitex
