#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace flexitex {

struct Term {
  enum class Kind : std::uint8_t { iri, string, integer };

  Kind kind = Kind::iri;
  std::string value;  ///< integers are kept in canonical decimal form

  static Term iri(std::string value) { return {Kind::iri, std::move(value)}; }
  static Term literal(std::string value) { return {Kind::string, std::move(value)}; }
  static Term integer(std::int64_t value) { return {Kind::integer, std::to_string(value)}; }

  bool is_iri() const { return kind == Kind::iri; }
  std::int64_t as_integer() const;

  bool operator==(const Term&) const = default;
  /// Kind first, then value; integers compare numerically.
  std::strong_ordering operator<=>(const Term& other) const;
};

/// Human-readable form: <iri>, "string", or 42.
std::string to_string(const Term& term);

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

using TermId = std::uint32_t;
using IdTriple = std::array<TermId, 3>;

/// In-memory triple store with per-file ownership and SPO/POS/OSP indexes.
/// Triples contributed by several files are stored once.
class Store {
 public:
  struct FileEntry {
    std::string root;
    std::uint64_t digest = 0;
    std::vector<IdTriple> triples;
  };

  TermId intern(const Term& term);
  std::optional<TermId> lookup(const Term& term) const;
  const Term& term(TermId id) const { return terms_.at(id); }

  /// Replaces every triple previously owned by `file`.
  void replace_file(const std::string& file, const std::vector<Triple>& triples, std::string root,
                    std::uint64_t digest);
  bool remove_file(const std::string& file);

  const std::map<std::string, FileEntry>& files() const { return files_; }
  const std::string* root(const std::string& file) const;
  std::optional<std::uint64_t> digest(const std::string& file) const;

  /// Sorted triples owned by `file`.
  std::vector<Triple> triples_of(const std::string& file) const;
  /// Number of distinct triples.
  std::size_t size() const { return counts_.size(); }

  /// All stored triples matching the given positions (unset = any).
  std::vector<IdTriple> match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o) const;
  bool contains(const IdTriple& t) const { return counts_.count(t) > 0; }

  std::vector<Term> objects(const Term& subject, std::string_view predicate) const;
  std::optional<Term> object(const Term& subject, std::string_view predicate) const;
  std::vector<Term> subjects(std::string_view predicate, const Term& object) const;

 private:
  struct IdTripleHash {
    std::size_t operator()(const IdTriple& t) const {
      std::uint64_t h = t[0];
      h = h * 0x9E3779B97F4A7C15ull ^ t[1];
      h = h * 0x9E3779B97F4A7C15ull ^ t[2];
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  using Level = std::unordered_map<TermId, std::unordered_map<TermId, std::unordered_set<TermId>>>;

  void insert(const IdTriple& t);
  void erase(const IdTriple& t);
  static std::string key(const Term& term);

  std::vector<Term> terms_;
  std::unordered_map<std::string, TermId> ids_;
  std::unordered_map<IdTriple, int, IdTripleHash> counts_;
  Level spo_, pos_, osp_;
  std::map<std::string, FileEntry> files_;
};

}  // namespace flexitex
