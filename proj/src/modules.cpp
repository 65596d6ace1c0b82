#include "flexitex/modules.hpp"

#include "flexitex/index.hpp"
#include "flexitex/vocab.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

namespace flexitex {

const ModuleInfo& FileSummary::scope_at(std::size_t offset) const {
  const ModuleInfo* best = &document;
  for (const auto& m : modules) {
    if (m.span.start <= offset && offset < m.span.end) {
      if (best == &document || m.span.start >= best->span.start) best = &m;
    }
  }
  return *best;
}

const ModuleInfo* FileSummary::find_module(std::string_view id) const {
  for (const auto& m : modules) {
    if (!m.anonymous && m.id == id) return &m;
  }
  return nullptr;
}

namespace {

struct NodeFacts {
  std::vector<std::string> types;
  std::map<std::string, std::vector<Term>> props;

  bool is(const std::string& type) const { return std::find(types.begin(), types.end(), type) != types.end(); }
  const Term* first(const std::string& predicate) const {
    auto it = props.find(predicate);
    if (it == props.end() || it->second.empty()) return nullptr;
    return &it->second.front();
  }
  std::string text(const std::string& predicate) const {
    const Term* t = first(predicate);
    return t ? t->value : std::string();
  }
  SourceSpan span() const {
    const Term* s = first(vocab::ide_start);
    const Term* e = first(vocab::ide_end);
    if (!s || !e) return {};
    return {static_cast<std::size_t>(s->as_integer()), static_cast<std::size_t>(e->as_integer())};
  }
};

}  // namespace

FileSummary summarize(const Store& store, const std::string& file) {
  FileSummary summary;
  summary.file = file;
  summary.document.file = file;
  auto it = store.files().find(file);
  if (it == store.files().end()) return summary;
  const std::string& root = it->second.root;

  std::map<std::string, NodeFacts> nodes;
  std::vector<std::pair<std::string, std::string>> has_symbol, has_import;
  for (const IdTriple& t : it->second.triples) {
    const std::string& s = store.term(t[0]).value;
    const std::string& p = store.term(t[1]).value;
    const Term& o = store.term(t[2]);
    NodeFacts& facts = nodes[s];
    if (p == vocab::rdf_type) facts.types.push_back(o.value);
    facts.props[p].push_back(o);
    if (p == vocab::ide_has_symbol) has_symbol.emplace_back(s, o.value);
    if (p == vocab::ide_has_import) has_import.emplace_back(s, o.value);
  }
  for (auto& [iri, facts] : nodes) {
    for (auto& [p, values] : facts.props) std::sort(values.begin(), values.end());
  }

  std::map<std::string, std::size_t> theory_index;
  std::vector<std::pair<SourceSpan, std::string>> theories;
  for (const auto& [iri, facts] : nodes) {
    if (facts.is(vocab::oo_theory)) theories.emplace_back(facts.span(), iri);
  }
  std::sort(theories.begin(), theories.end());
  for (const auto& [span, iri] : theories) {
    const NodeFacts& facts = nodes[iri];
    ModuleInfo m;
    m.id = facts.text(vocab::rdf_id);
    m.file = file;
    m.span = span;
    m.anonymous = facts.first(vocab::ide_anonymous) != nullptr;
    theory_index[iri] = summary.modules.size();
    summary.modules.push_back(std::move(m));
  }
  auto owner = [&](const std::vector<std::pair<std::string, std::string>>& links,
                   const std::string& target) -> ModuleInfo* {
    for (const auto& [from, to] : links) {
      if (to != target) continue;
      if (auto t = theory_index.find(from); t != theory_index.end()) return &summary.modules[t->second];
      if (from == root) return &summary.document;
    }
    return nullptr;
  };

  for (const auto& [iri, facts] : nodes) {
    if (facts.is(vocab::ide_symbol)) {
      ModuleInfo* m = owner(has_symbol, iri);
      if (!m) m = &summary.document;
      SymbolInfo s;
      s.name = facts.text(vocab::ide_name);
      if (const Term* a = facts.first(vocab::ide_arity)) s.arity = a->as_integer();
      s.presentation = facts.text(vocab::ide_presentation);
      s.module = m->id;
      s.file = file;
      s.span = facts.span();
      m->symbols.push_back(std::move(s));
    }
    if (facts.is(vocab::ide_import_module_command)) {
      ModuleInfo* m = owner(has_import, iri);
      if (!m) m = &summary.document;
      ImportInfo imp;
      imp.raw_file = facts.text(vocab::ide_module_file);
      imp.file = facts.text(vocab::ide_resolved_file);
      imp.module_id = facts.text(vocab::ide_module_id);
      imp.span = facts.span();
      m->imports.push_back(std::move(imp));
    }
    if (facts.is(vocab::oo_definition)) {
      DefinitionInfo d;
      if (auto f = facts.props.find(vocab::ide_for); f != facts.props.end()) {
        for (const Term& t : f->second) d.for_names.push_back(t.value);
      }
      d.definiendum = facts.text(vocab::ide_definiendum);
      if (const Term* t = facts.first(vocab::ide_title)) d.title = t->value;
      d.text = facts.text(vocab::ide_text);
      if (const Term* part = facts.first(vocab::oo_part_of)) {
        if (auto t = theory_index.find(part->value); t != theory_index.end()) d.module = summary.modules[t->second].id;
      }
      d.file = file;
      d.span = facts.span();
      summary.definitions.push_back(std::move(d));
    }
  }
  auto by_span = [](const auto& a, const auto& b) { return a.span < b.span; };
  for (auto* m : {&summary.document}) {
    std::sort(m->symbols.begin(), m->symbols.end(), by_span);
    std::sort(m->imports.begin(), m->imports.end(), by_span);
  }
  for (auto& m : summary.modules) {
    std::sort(m.symbols.begin(), m.symbols.end(), by_span);
    std::sort(m.imports.begin(), m.imports.end(), by_span);
  }
  std::sort(summary.definitions.begin(), summary.definitions.end(), by_span);
  return summary;
}

// ---------------------------------------------------------------------------

ModuleGraph ModuleGraph::explore(Indexer& indexer, const std::vector<std::string>& files) {
  ModuleGraph graph;
  std::deque<std::string> queue(files.begin(), files.end());
  while (!queue.empty()) {
    std::string file = std::move(queue.front());
    queue.pop_front();
    if (graph.files_.count(file) || !indexer.workspace().exists(file)) continue;
    indexer.get_index(file);
    auto& summary = graph.files_[file] = summarize(indexer.store(), file);
    auto visit = [&](const ModuleInfo& m) {
      for (const auto& imp : m.imports) {
        if (!imp.file.empty()) queue.push_back(imp.file);
      }
    };
    visit(summary.document);
    for (const auto& m : summary.modules) visit(m);
  }
  for (const auto& [file, summary] : graph.files_) {
    auto add_edges = [&](const ModuleInfo& m) {
      ModuleKey from{file, m.anonymous ? std::string() : m.id};
      if (m.anonymous) return;  // not addressable, so never part of a path
      auto& out = graph.edges_[from];
      for (std::size_t i = 0; i < m.imports.size(); ++i) {
        if (auto to = graph.target(m.imports[i])) out.push_back({from, *to, i});
      }
    };
    add_edges(summary.document);
    for (const auto& m : summary.modules) {
      // A repeated id in one file: the first module owns the key.
      if (&m == summary.find_module(m.id)) add_edges(m);
    }
  }
  return graph;
}

const FileSummary* ModuleGraph::summary(const std::string& file) const {
  auto it = files_.find(file);
  return it == files_.end() ? nullptr : &it->second;
}

const ModuleInfo* ModuleGraph::module(const ModuleKey& key) const {
  const FileSummary* s = summary(key.file);
  if (!s) return nullptr;
  if (key.id.empty()) return &s->document;
  return s->find_module(key.id);
}

std::optional<ModuleKey> ModuleGraph::target(const ImportInfo& import) const {
  if (import.module_id.empty()) return std::nullopt;
  const FileSummary* s = summary(import.file);
  if (!s || !s->find_module(import.module_id)) return std::nullopt;
  return ModuleKey{import.file, import.module_id};
}

const std::vector<ModuleGraph::Edge>& ModuleGraph::edges(const ModuleKey& key) const {
  static const std::vector<Edge> none;
  auto it = edges_.find(key);
  return it == edges_.end() ? none : it->second;
}

std::set<ModuleKey> ModuleGraph::reachable(const ModuleKey& from, std::optional<std::size_t> skip_import) const {
  std::set<ModuleKey> seen;
  std::vector<ModuleKey> work{from};
  while (!work.empty()) {
    ModuleKey k = std::move(work.back());
    work.pop_back();
    for (const Edge& e : edges(k)) {
      if (skip_import && e.from == from && e.import_index == *skip_import) continue;
      if (seen.insert(e.to).second) work.push_back(e.to);
    }
  }
  return seen;
}

std::map<ModuleKey, std::size_t> ModuleGraph::distances(const ModuleKey& from) const {
  std::map<ModuleKey, std::size_t> dist{{from, 0}};
  std::deque<ModuleKey> queue{from};
  while (!queue.empty()) {
    ModuleKey k = queue.front();
    queue.pop_front();
    for (const Edge& e : edges(k)) {
      if (dist.emplace(e.to, dist[k] + 1).second) queue.push_back(e.to);
    }
  }
  return dist;
}

std::vector<std::size_t> ModuleGraph::redundant_imports(const ModuleKey& key) const {
  std::vector<std::size_t> out;
  for (const Edge& e : edges(key)) {
    if (reachable(key, e.import_index).count(e.to)) out.push_back(e.import_index);
  }
  return out;
}

std::vector<ModuleGraph::Cycle> ModuleGraph::cycles() const {
  // Tarjan's algorithm, iterative.
  std::vector<ModuleKey> keys;
  std::map<ModuleKey, int> index_of;
  for (const auto& [file, summary] : files_) {
    keys.push_back({file, ""});
    for (const auto& m : summary.modules) {
      if (!m.anonymous) keys.push_back({file, m.id});
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (std::size_t i = 0; i < keys.size(); ++i) index_of[keys[i]] = static_cast<int>(i);

  const int n = static_cast<int>(keys.size());
  std::vector<int> index(n, -1), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0, components = 0;
  for (int start = 0; start < n; ++start) {
    if (index[start] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> call{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto& out = edges(keys[v]);
      if (next < out.size()) {
        int w = index_of.at(out[next++].to);
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components;
          if (w == v) break;
        }
        ++components;
      }
      int finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  std::map<int, Cycle> by_component;
  for (int v = 0; v < n; ++v) {
    for (const Edge& e : edges(keys[v])) {
      int w = index_of.at(e.to);
      if (component[w] != component[v]) continue;
      const ModuleInfo* m = module(e.from);
      SourceSpan span = m->imports[e.import_index].span;
      auto [it, inserted] = by_component.try_emplace(component[v], Cycle{e, {}});
      if (!inserted) {
        const Edge& best = it->second.edge;
        SourceSpan best_span = module(best.from)->imports[best.import_index].span;
        if (std::tie(e.from.file, span) < std::tie(best.from.file, best_span)) it->second.edge = e;
      }
    }
  }
  std::vector<Cycle> out;
  for (auto& [c, cycle] : by_component) {
    for (int v = 0; v < n; ++v) {
      if (component[v] == c) cycle.members.push_back(keys[v]);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

}  // namespace flexitex

namespace flexitex {

std::vector<ScopedSymbol> symbols_in_scope(Indexer& indexer, const std::string& file, std::size_t offset) {
  ModuleGraph graph = ModuleGraph::explore(indexer, {file});
  const FileSummary* summary = graph.summary(file);
  std::vector<ScopedSymbol> out;
  if (!summary) return out;
  const ModuleInfo& scope = summary->scope_at(offset);

  // Breadth-first from the imports preceding the offset.
  std::map<ModuleKey, std::size_t> distance;
  std::deque<ModuleKey> queue;
  for (const auto& imp : scope.imports) {
    if (imp.span.start >= offset) continue;
    if (auto to = graph.target(imp); to && distance.emplace(*to, 1).second) queue.push_back(*to);
  }
  while (!queue.empty()) {
    ModuleKey k = queue.front();
    queue.pop_front();
    for (const auto& e : graph.edges(k)) {
      if (distance.emplace(e.to, distance[k] + 1).second) queue.push_back(e.to);
    }
  }
  const ModuleKey self{file, scope.id};

  struct Candidate {
    std::size_t distance;
    const DefinitionInfo* def;
  };
  std::map<std::string, Candidate> best_definition;
  auto consider_definitions = [&](const ModuleInfo& m, std::size_t d) {
    const FileSummary* s = graph.summary(m.file);
    for (const auto& def : s->definitions) {
      if (def.module != m.id) continue;
      for (const auto& name : def.for_names) {
        auto [it, inserted] = best_definition.try_emplace(name, Candidate{d, &def});
        if (inserted) continue;
        const Candidate& c = it->second;
        if (std::tie(d, def.file, def.span) < std::tie(c.distance, c.def->file, c.def->span)) {
          it->second = Candidate{d, &def};
        }
      }
    }
  };

  std::vector<const SymbolInfo*> symbols;
  for (const auto& s : scope.symbols) {
    if (s.span.start < offset) symbols.push_back(&s);
  }
  consider_definitions(scope, 0);
  for (const auto& [key, d] : distance) {
    if (key == self) continue;
    const ModuleInfo* m = graph.module(key);
    if (!m) continue;
    for (const auto& s : m->symbols) symbols.push_back(&s);
    consider_definitions(*m, d);
  }
  for (const SymbolInfo* s : symbols) {
    ScopedSymbol item{*s, std::nullopt};
    if (auto it = best_definition.find(s->name); it != best_definition.end()) item.definition = it->second.def->text;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace flexitex
