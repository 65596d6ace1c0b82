#pragma once

#include "flexitex/diagnostic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flexitex {

class Indexer;

struct SearchHit {
  std::string file;
  SourceSpan span;
  std::string definiendum;  ///< `for` names joined by ','
  std::optional<std::string> title;
  std::string snippet;
  std::size_t score = 0;  ///< total occurrences of the keywords

  bool operator==(const SearchHit&) const = default;
};

/// Lower-cased words of `text`: maximal runs of ASCII letters, digits and
/// non-ASCII bytes.
std::vector<std::string> search_words(std::string_view text);

/// Refreshes the index of every workspace file, then returns the
/// definitions whose text or definiendum contains every keyword as a whole
/// word (case-insensitive), by score descending, then file and position.
std::vector<SearchHit> search_definitions(Indexer& indexer, const std::vector<std::string>& keywords);

}  // namespace flexitex
