#include "flexitex/ntriples.hpp"

#include "flexitex/vocab.hpp"

#include <algorithm>
#include <cstdio>

namespace flexitex {

namespace {

void append_escaped_literal(std::string& out, std::string_view value) {
  for (unsigned char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[12];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

void append_iri(std::string& out, std::string_view iri) {
  out += '<';
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
        c == '`' || c == '\\') {
      char buf[12];
      std::snprintf(buf, sizeof buf, "\\u%04X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '>';
}

void append_term(std::string& out, const Term& t) {
  switch (t.kind) {
    case Term::Kind::iri:
      append_iri(out, t.value);
      break;
    case Term::Kind::string:
      out += '"';
      append_escaped_literal(out, t.value);
      out += '"';
      break;
    case Term::Kind::integer:
      out += '"';
      out += t.value;
      out += "\"^^";
      append_iri(out, vocab::xsd_integer);
      break;
  }
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t number) : line_(line), number_(number) {}

  Triple run() {
    Triple t;
    t.subject = term();
    t.predicate = term();
    t.object = term();
    if (!t.subject.is_iri() || !t.predicate.is_iri()) fail("subject and predicate must be IRIs");
    skip();
    if (pos_ >= line_.size() || line_[pos_] != '.') fail("expected '.'");
    ++pos_;
    skip();
    if (pos_ != line_.size()) fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw NTriplesError("line " + std::to_string(number_) + ": " + message);
  }
  void skip() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  unsigned long hex(std::size_t digits) {
    if (pos_ + digits > line_.size()) fail("truncated escape");
    unsigned long v = 0;
    for (std::size_t k = 0; k < digits; ++k) {
      char c = line_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<unsigned long>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned long>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned long>(c - 'A' + 10);
      else fail("bad hex digit");
    }
    return v;
  }

  std::string delimited(char close, bool literal) {
    std::string value;
    for (;;) {
      if (pos_ >= line_.size()) fail("unterminated term");
      char c = line_[pos_++];
      if (c == close) return value;
      if (c != '\\') {
        value += c;
        continue;
      }
      if (pos_ >= line_.size()) fail("unterminated escape");
      char e = line_[pos_++];
      if (e == 'u') append_utf8(value, hex(4));
      else if (e == 'U') append_utf8(value, hex(8));
      else if (!literal) fail("only \\u escapes are allowed in IRIs");
      else if (e == 'n') value += '\n';
      else if (e == 'r') value += '\r';
      else if (e == 't') value += '\t';
      else if (e == 'b') value += '\b';
      else if (e == 'f') value += '\f';
      else if (e == '"') value += '"';
      else if (e == '\'') value += '\'';
      else if (e == '\\') value += '\\';
      else fail(std::string("unknown escape \\") + e);
    }
  }

  Term term() {
    skip();
    if (pos_ >= line_.size()) fail("missing term");
    char c = line_[pos_++];
    if (c == '<') return Term::iri(delimited('>', false));
    if (c != '"') fail("expected '<' or '\"'");
    std::string value = delimited('"', true);
    if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
      pos_ += 2;
      if (pos_ >= line_.size() || line_[pos_] != '<') fail("expected datatype IRI");
      ++pos_;
      std::string type = delimited('>', false);
      if (type != vocab::xsd_integer) fail("unsupported datatype <" + type + ">");
      try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        Term t = Term::integer(v);
        if (t.value != value) fail("non-canonical integer \"" + value + "\"");
        return t;
      } catch (const std::logic_error&) {
        fail("invalid integer \"" + value + "\"");
      }
    }
    return Term::literal(std::move(value));
  }

  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string write_ntriples(const std::vector<Triple>& triples) {
  std::vector<std::string> lines;
  lines.reserve(triples.size());
  for (const Triple& t : triples) {
    std::string line;
    append_term(line, t.subject);
    line += ' ';
    append_term(line, t.predicate);
    line += ' ';
    append_term(line, t.object);
    line += " .\n";
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

std::vector<Triple> read_ntriples(std::string_view text) {
  std::vector<Triple> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    pos = end + 1;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    out.push_back(LineParser(line, number).run());
  }
  return out;
}

}  // namespace flexitex
