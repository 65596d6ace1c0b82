#include "flexitex/syntax.hpp"

#include <algorithm>
#include <unordered_map>

namespace flexitex {

namespace {

// Above this many contested markers the cubic table is not affordable and
// the greedy stack matching is used as-is.
constexpr std::size_t kMaxDpMarkers = 6000;

std::vector<std::size_t> greedy_unmatched(std::span<const EnvMarker> markers,
                                          std::span<const std::size_t> active,
                                          std::vector<int>& partner) {
  std::vector<std::size_t> stack;
  std::vector<std::size_t> unmatched;
  for (std::size_t idx : active) {
    const EnvMarker& m = markers[idx];
    if (m.is_begin) {
      stack.push_back(idx);
    } else if (!stack.empty() && markers[stack.back()].name == m.name) {
      partner[idx] = static_cast<int>(stack.back());
      partner[stack.back()] = static_cast<int>(idx);
      stack.pop_back();
    } else {
      unmatched.push_back(idx);
    }
  }
  unmatched.insert(unmatched.end(), stack.begin(), stack.end());
  return unmatched;
}

}  // namespace

std::vector<int> match_markers(std::span<const EnvMarker> markers) {
  const std::size_t n = markers.size();
  std::vector<int> partner(n, -1);
  if (n == 0) return partner;

  // A begin with no equal-named end after it (or an end with no begin before
  // it) can never be matched.
  std::vector<bool> viable(n, false);
  {
    std::unordered_map<std::uint32_t, std::size_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      if (markers[i].is_begin) ++seen[markers[i].name];
      else viable[i] = seen.count(markers[i].name) > 0;
    }
    seen.clear();
    for (std::size_t i = n; i-- > 0;) {
      if (!markers[i].is_begin) ++seen[markers[i].name];
      else viable[i] = seen.count(markers[i].name) > 0;
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (viable[i]) active.push_back(i);
  }

  // Fast path: if the stack discipline matches every viable marker, no
  // matching can do better.
  if (greedy_unmatched(markers, active, partner).empty()) return partner;
  if (active.size() > kMaxDpMarkers) return partner;
  std::fill(partner.begin(), partner.end(), -1);

  const std::size_t m = active.size();
  // best[i * (m + 1) + j]: maximum pairs within active[i, j).
  std::vector<std::uint16_t> best((m + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint16_t& { return best[i * (m + 1) + j]; };

  // Candidate partners (positions in `active`) for each begin.
  std::vector<std::vector<std::size_t>> ends(m);
  for (std::size_t i = 0; i < m; ++i) {
    const EnvMarker& b = markers[active[i]];
    if (!b.is_begin) continue;
    for (std::size_t k = i + 1; k < m; ++k) {
      const EnvMarker& e = markers[active[k]];
      if (!e.is_begin && e.name == b.name) ends[i].push_back(k);
    }
  }

  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t j = i + 1; j <= m; ++j) {
      std::uint16_t value = at(i + 1, j);
      for (std::size_t k : ends[i]) {
        if (k >= j) break;
        auto candidate = static_cast<std::uint16_t>(1 + at(i + 1, k) + at(k + 1, j));
        if (candidate > value) value = candidate;
      }
      at(i, j) = value;
    }
  }

  // Reconstruct, preferring to leave outer begins unmatched and to close
  // with the nearest end on ties.
  std::vector<std::pair<std::size_t, std::size_t>> work{{0, m}};
  while (!work.empty()) {
    auto [i, j] = work.back();
    work.pop_back();
    if (i >= j) continue;
    std::uint16_t target = at(i, j);
    if (target == 0) continue;
    if (at(i + 1, j) == target) {
      work.push_back({i + 1, j});
      continue;
    }
    for (std::size_t k : ends[i]) {
      if (k >= j) break;
      if (1 + at(i + 1, k) + at(k + 1, j) == target) {
        partner[active[i]] = static_cast<int>(active[k]);
        partner[active[k]] = static_cast<int>(active[i]);
        work.push_back({i + 1, k});
        work.push_back({k + 1, j});
        break;
      }
    }
  }
  return partner;
}

std::optional<std::string> environment_name(const Document& doc, NodeId command) {
  const Node& n = doc.nodes.at(command);
  if (n.kind != NodeKind::command || (n.name != "begin" && n.name != "end")) return std::nullopt;
  NodeId opt = first_option(doc, command, Delimiter::brace);
  if (opt == no_node) return std::nullopt;
  std::string name = option_text(doc, opt);
  if (name.empty()) return std::nullopt;
  return name;
}

EnvironmentMatch match_environments(const Document& doc) {
  EnvironmentMatch result;
  std::vector<EnvMarker> markers;
  std::vector<NodeId> marker_nodes;
  std::vector<std::string> names;
  std::unordered_map<std::string, std::uint32_t> name_ids;

  for (NodeId id = 0; id < doc.nodes.size(); ++id) {
    const Node& n = doc.nodes[id];
    if (n.kind != NodeKind::command || (n.name != "begin" && n.name != "end")) continue;
    auto name = environment_name(doc, id);
    if (!name) {
      result.diagnostics.push_back(Diagnostic{
          Severity::error, std::string(codes::malformed_environment),
          "\\" + n.name + " without an environment name", doc.path, n.head_span()});
      continue;
    }
    auto [it, inserted] = name_ids.try_emplace(*name, static_cast<std::uint32_t>(names.size()));
    if (inserted) names.push_back(*name);
    markers.push_back({n.name == "begin", it->second});
    marker_nodes.push_back(id);
  }

  auto partner = match_markers(markers);
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const std::string& name = names[markers[i].name];
    const Node& n = doc.nodes[marker_nodes[i]];
    if (markers[i].is_begin) {
      EnvironmentPair pair{name, marker_nodes[i], no_node};
      if (partner[i] >= 0) pair.end = marker_nodes[static_cast<std::size_t>(partner[i])];
      result.pairs.push_back(std::move(pair));
    }
    if (partner[i] >= 0) continue;
    std::string message = markers[i].is_begin
                              ? "\\begin{" + name + "} is never closed"
                              : "\\end{" + name + "} has no matching \\begin{" + name + "}";
    result.diagnostics.push_back(Diagnostic{Severity::error, std::string(codes::env_mismatch),
                                            std::move(message), doc.path, n.span});
  }
  return result;
}

}  // namespace flexitex
