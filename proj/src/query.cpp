#include "flexitex/query.hpp"

#include "flexitex/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace flexitex {

std::optional<std::string> expand_prefixed(std::string_view name) {
  auto colon = name.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  std::string_view prefix = name.substr(0, colon);
  std::string_view local = name.substr(colon + 1);
  if (local.empty()) return std::nullopt;
  for (char c : local) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return std::nullopt;
  }
  std::string_view ns;
  if (prefix == "rdf") ns = vocab::rdf_ns;
  else if (prefix == "IDE") ns = vocab::ide_ns;
  else if (prefix == "oo") ns = vocab::oo_ns;
  else if (prefix == "xsd") ns = "http://www.w3.org/2001/XMLSchema#";
  else return std::nullopt;
  return std::string(ns) + std::string(local);
}

namespace {

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {}

  Query run() {
    Query q;
    skip_blank(true);
    if (keyword("SELECT")) {
      q.projected = true;
      skip_blank(true);
      while (peek() == '?') {
        q.variables.push_back(variable());
        skip_blank(true);
      }
      if (q.variables.empty()) fail("SELECT needs at least one variable");
      if (!keyword("WHERE")) fail("expected WHERE");
    }
    skip_blank(true);
    bool braced = false;
    if (peek() == '{') {
      braced = true;
      ++pos_;
    }
    std::vector<PatternTerm> current;
    for (;;) {
      skip_blank(false);
      if (at_end()) break;
      char c = peek();
      if (c == '}' && braced) {
        ++pos_;
        skip_blank(true);
        if (!at_end()) fail("unexpected text after '}'");
        braced = false;
        break;
      }
      if (c == ';' || c == '.' || c == '\n') {
        ++pos_;
        finish(current, q);
        continue;
      }
      current.push_back(term());
      if (current.size() > 3) fail("a pattern has exactly three terms");
    }
    if (braced) fail("missing '}'");
    finish(current, q);

    if (!q.projected) {
      for (const auto& p : q.patterns) {
        for (const auto& t : p.terms) {
          if (t.variable && std::find(q.variables.begin(), q.variables.end(), *t.variable) == q.variables.end()) {
            q.variables.push_back(*t.variable);
          }
        }
      }
    } else {
      for (const auto& v : q.variables) {
        bool used = false;
        for (const auto& p : q.patterns) {
          for (const auto& t : p.terms) used = used || t.variable == v;
        }
        if (!used) fail("selected variable ?" + v + " does not occur in any pattern");
      }
    }
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw QueryError("query error at offset " + std::to_string(pos_) + ": " + message);
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_blank(bool newlines) {
    while (!at_end()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool keyword(std::string_view word) {
    if (text_.size() - pos_ < word.size()) return false;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + k])) != word[k]) return false;
    }
    std::size_t after = pos_ + word.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after]))) return false;
    pos_ = after;
    return true;
  }

  static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string variable() {
    ++pos_;  // '?'
    std::size_t start = pos_;
    while (!at_end() && name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("empty variable name");
    return std::string(text_.substr(start, pos_ - start));
  }

  PatternTerm term() {
    char c = peek();
    if (c == '?') return {variable(), {}};
    if (c == '<') {
      std::size_t close = text_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated IRI");
      std::string_view iri = text_.substr(pos_ + 1, close - pos_ - 1);
      if (iri.empty() || iri.find(':') == std::string_view::npos) fail("IRI must be absolute: <" + std::string(iri) + ">");
      for (char ch : iri) {
        if (static_cast<unsigned char>(ch) <= 0x20 || std::string_view("<\"{}|^`\\").find(ch) != std::string_view::npos) {
          fail("invalid character in IRI");
        }
      }
      pos_ = close + 1;
      return {std::nullopt, Term::iri(std::string(iri))};
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      for (;;) {
        if (at_end()) fail("unterminated string literal");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (at_end()) fail("unterminated string literal");
          char e = text_[pos_++];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: fail(std::string("unknown escape \\") + e);
          }
        } else {
          value += ch;
        }
      }
      return {std::nullopt, Term::literal(std::move(value))};
    }
    std::size_t start = pos_;
    while (!at_end()) {
      char ch = text_[pos_];
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == ';' || ch == '}') break;
      // A '.' ends the pattern unless it sits inside a name.
      if (ch == '.' && (pos_ + 1 >= text_.size() || !name_char(text_[pos_ + 1]))) break;
      ++pos_;
    }
    std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty()) fail("unexpected character '" + std::string(1, c) + "'");
    bool numeric = true;
    std::size_t digits_from = (word[0] == '-' || word[0] == '+') ? 1 : 0;
    if (digits_from == word.size()) numeric = false;
    for (std::size_t k = digits_from; k < word.size(); ++k) numeric = numeric && std::isdigit(static_cast<unsigned char>(word[k]));
    if (numeric) {
      try {
        return {std::nullopt, Term::integer(std::stoll(std::string(word)))};
      } catch (const std::exception&) {
        fail("integer out of range");
      }
    }
    auto iri = expand_prefixed(word);
    if (!iri) fail("cannot interpret '" + std::string(word) + "'");
    return {std::nullopt, Term::iri(*iri)};
  }

  void finish(std::vector<PatternTerm>& current, Query& q) {
    if (current.empty()) return;
    if (current.size() != 3) fail("a pattern has exactly three terms");
    if (!current[0].variable && !current[0].term.is_iri()) fail("subject must be an IRI or variable");
    if (!current[1].variable && !current[1].term.is_iri()) fail("predicate must be an IRI or variable");
    q.patterns.push_back({{current[0], current[1], current[2]}});
    current.clear();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

struct Solver {
  const Store& store;
  std::vector<std::array<std::optional<TermId>, 3>> constants;
  std::vector<std::array<int, 3>> slots;  // variable slot per position, -1 for constants
  std::vector<std::optional<TermId>> values;
  std::vector<bool> done;
  std::vector<std::vector<TermId>> solutions;

  void solve(std::size_t remaining) {
    if (remaining == 0) {
      std::vector<TermId> row;
      row.reserve(values.size());
      for (const auto& v : values) row.push_back(*v);
      solutions.push_back(std::move(row));
      return;
    }
    // Most-bound pattern first.
    std::size_t pick = 0;
    int best = -1;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (done[i]) continue;
      int bound = 0;
      for (int k = 0; k < 3; ++k) bound += bound_at(i, k).has_value();
      if (bound > best) {
        best = bound;
        pick = i;
      }
    }
    done[pick] = true;
    auto s = bound_at(pick, 0), p = bound_at(pick, 1), o = bound_at(pick, 2);
    for (const IdTriple& t : store.match(s, p, o)) {
      std::vector<int> assigned;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        int slot = slots[pick][k];
        if (slot < 0) continue;
        if (values[slot]) {
          ok = *values[slot] == t[k];
        } else {
          values[slot] = t[k];
          assigned.push_back(slot);
        }
      }
      if (ok) solve(remaining - 1);
      for (int slot : assigned) values[slot].reset();
    }
    done[pick] = false;
  }

  std::optional<TermId> bound_at(std::size_t i, int k) const {
    int slot = slots[i][k];
    if (slot < 0) return constants[i][k];
    return values[slot];
  }
};

}  // namespace

Query parse_query(std::string_view text) { return QueryParser(text).run(); }

QueryResult evaluate(const Store& store, const Query& query) {
  QueryResult result;
  result.variables = query.variables;

  std::vector<std::string> all_vars;
  for (const auto& p : query.patterns) {
    for (const auto& t : p.terms) {
      if (t.variable && std::find(all_vars.begin(), all_vars.end(), *t.variable) == all_vars.end()) {
        all_vars.push_back(*t.variable);
      }
    }
  }

  Solver solver{store, {}, {}, std::vector<std::optional<TermId>>(all_vars.size()),
                std::vector<bool>(query.patterns.size(), false), {}};
  for (const auto& p : query.patterns) {
    std::array<std::optional<TermId>, 3> consts;
    std::array<int, 3> slot{-1, -1, -1};
    for (int k = 0; k < 3; ++k) {
      const PatternTerm& t = p.terms[k];
      if (t.variable) {
        slot[k] = static_cast<int>(std::find(all_vars.begin(), all_vars.end(), *t.variable) - all_vars.begin());
      } else {
        consts[k] = store.lookup(t.term);
        if (!consts[k]) return result;  // constant absent from the store
      }
    }
    solver.constants.push_back(consts);
    solver.slots.push_back(slot);
  }
  solver.solve(query.patterns.size());

  std::vector<std::size_t> columns;
  for (const auto& v : result.variables) {
    columns.push_back(static_cast<std::size_t>(std::find(all_vars.begin(), all_vars.end(), v) - all_vars.begin()));
  }
  for (const auto& row : solver.solutions) {
    std::vector<Term> out;
    out.reserve(columns.size());
    for (std::size_t c : columns) out.push_back(store.term(row[c]));
    result.rows.push_back(std::move(out));
  }
  std::sort(result.rows.begin(), result.rows.end());
  if (query.projected) result.rows.erase(std::unique(result.rows.begin(), result.rows.end()), result.rows.end());
  return result;
}

}  // namespace flexitex
