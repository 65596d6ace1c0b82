#include "flexitex/search.hpp"

#include "flexitex/index.hpp"
#include "flexitex/modules.hpp"

#include <algorithm>
#include <cctype>

namespace flexitex {

namespace {

bool word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string snippet_around(const std::string& text, const std::vector<std::string>& keywords) {
  constexpr std::size_t kWindow = 80;
  std::string lower = text;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::size_t hit = std::string::npos;
  for (const auto& k : keywords) hit = std::min(hit, lower.find(k));
  if (hit == std::string::npos) hit = 0;
  std::size_t start = hit > kWindow / 4 ? hit - kWindow / 4 : 0;
  // Do not cut a UTF-8 sequence.
  while (start > 0 && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) --start;
  std::size_t end = std::min(text.size(), start + kWindow);
  while (end < text.size() && (static_cast<unsigned char>(text[end]) & 0xC0) == 0x80) ++end;
  std::string out = text.substr(start, end - start);
  if (start > 0) out = "..." + out;
  if (end < text.size()) out += "...";
  return out;
}

}  // namespace

std::vector<std::string> search_words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (word_byte(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<SearchHit> search_definitions(Indexer& indexer, const std::vector<std::string>& keywords) {
  std::vector<std::string> wanted;
  for (const auto& k : keywords) {
    for (auto& w : search_words(k)) wanted.push_back(std::move(w));
  }
  std::vector<SearchHit> hits;
  indexer.refresh_all();
  if (wanted.empty()) return hits;

  for (const auto& [file, entry] : indexer.store().files()) {
    for (const auto& def : summarize(indexer.store(), file).definitions) {
      const std::string& definiendum = def.definiendum;
      auto words = search_words(def.text);
      auto more = search_words(definiendum);
      words.insert(words.end(), more.begin(), more.end());
      std::size_t score = 0;
      bool all = true;
      for (const auto& k : wanted) {
        auto count = static_cast<std::size_t>(std::count(words.begin(), words.end(), k));
        all = all && count > 0;
        score += count;
      }
      if (!all) continue;
      hits.push_back({file, def.span, definiendum, def.title, snippet_around(def.text, wanted), score});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::tie(a.file, a.span) < std::tie(b.file, b.span);
  });
  return hits;
}

}  // namespace flexitex
