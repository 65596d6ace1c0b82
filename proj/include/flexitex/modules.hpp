#pragma once

#include "flexitex/diagnostic.hpp"
#include "flexitex/store.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace flexitex {

class Indexer;

struct ImportInfo {
  std::string raw_file;   ///< path as written
  std::string file;       ///< resolved workspace-relative path
  std::string module_id;  ///< empty when the id option is missing
  SourceSpan span;        ///< the \importmodule command
};

struct SymbolInfo {
  std::string name;
  std::int64_t arity = 0;
  std::string presentation;
  std::string module;  ///< owning module id; empty at document level
  std::string file;
  SourceSpan span;
};

struct DefinitionInfo {
  std::vector<std::string> for_names;  ///< sorted
  std::string definiendum;             ///< `for` names in source order, joined by ','
  std::optional<std::string> title;
  std::string text;
  std::string module;
  std::string file;
  SourceSpan span;
};

struct ModuleInfo {
  std::string id;  ///< empty for the document-level scope
  std::string file;
  SourceSpan span;
  bool anonymous = false;
  std::vector<SymbolInfo> symbols;   ///< source order
  std::vector<ImportInfo> imports;   ///< source order
};

/// What the index knows about one file.
struct FileSummary {
  std::string file;
  std::vector<ModuleInfo> modules;  ///< source order
  ModuleInfo document;              ///< imports and symbols outside every module
  std::vector<DefinitionInfo> definitions;

  /// Innermost module whose span contains `offset`, else `document`.
  const ModuleInfo& scope_at(std::size_t offset) const;
  const ModuleInfo* find_module(std::string_view id) const;
};

/// Reads a file's summary from its indexed triples.
FileSummary summarize(const Store& store, const std::string& file);

struct ModuleKey {
  std::string file;
  std::string id;  ///< empty: the document-level scope of `file`

  auto operator<=>(const ModuleKey&) const = default;
};

/// Import graph over the modules reachable from a set of files. Edges are
/// the import statements whose target file and module exist.
class ModuleGraph {
 public:
  struct Edge {
    ModuleKey from;
    ModuleKey to;
    std::size_t import_index;  ///< position in the importing module's imports
  };

  /// Indexes (as needed) and explores every file reachable by imports.
  static ModuleGraph explore(Indexer& indexer, const std::vector<std::string>& files);

  const FileSummary* summary(const std::string& file) const;
  const ModuleInfo* module(const ModuleKey& key) const;
  std::optional<ModuleKey> target(const ImportInfo& import) const;

  /// Outgoing edges of `key`, in import order.
  const std::vector<Edge>& edges(const ModuleKey& key) const;

  /// Modules reachable from `from` through one or more edges, optionally
  /// ignoring one import of `from`.
  std::set<ModuleKey> reachable(const ModuleKey& from, std::optional<std::size_t> skip_import = {}) const;

  /// Breadth-first import distance from `from` (0 for itself).
  std::map<ModuleKey, std::size_t> distances(const ModuleKey& from) const;

  /// Imports of `key` whose removal leaves its reachable set unchanged.
  std::vector<std::size_t> redundant_imports(const ModuleKey& key) const;

  /// One representative edge per import cycle (strongly connected component
  /// with a cycle): the edge with the smallest (file, span) inside it,
  /// together with the member modules in order.
  struct Cycle {
    Edge edge;
    std::vector<ModuleKey> members;
  };
  std::vector<Cycle> cycles() const;

 private:
  std::map<std::string, FileSummary> files_;
  std::map<ModuleKey, std::vector<Edge>> edges_;
};

struct ScopedSymbol {
  SymbolInfo symbol;
  std::optional<std::string> definition;  ///< text of the nearest definition for it
};

/// Symbols usable at `offset` of `file`: those of the enclosing module (or
/// the document-level scope) defined before the offset, plus every symbol of
/// the modules transitively imported by its imports that precede the
/// offset. Each carries the text of the nearest definition in scope whose
/// `for` names it, nearest by import distance, ties by file then position.
std::vector<ScopedSymbol> symbols_in_scope(Indexer& indexer, const std::string& file, std::size_t offset);

}  // namespace flexitex
