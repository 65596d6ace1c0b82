#include "flexitex/store.hpp"

#include <algorithm>
#include <stdexcept>

namespace flexitex {

std::int64_t Term::as_integer() const {
  if (kind != Kind::integer) throw std::logic_error("term is not an integer");
  return std::stoll(value);
}

std::strong_ordering Term::operator<=>(const Term& other) const {
  if (auto c = kind <=> other.kind; c != 0) return c;
  if (kind == Kind::integer) return as_integer() <=> other.as_integer();
  return value <=> other.value;
}

std::string to_string(const Term& term) {
  switch (term.kind) {
    case Term::Kind::iri: return "<" + term.value + ">";
    case Term::Kind::string: return "\"" + term.value + "\"";
    case Term::Kind::integer: return term.value;
  }
  return term.value;
}

std::string Store::key(const Term& term) {
  std::string k;
  k.reserve(term.value.size() + 1);
  k.push_back(static_cast<char>('0' + static_cast<int>(term.kind)));
  k += term.value;
  return k;
}

TermId Store::intern(const Term& term) {
  auto [it, inserted] = ids_.try_emplace(key(term), static_cast<TermId>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<TermId> Store::lookup(const Term& term) const {
  auto it = ids_.find(key(term));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Store::insert(const IdTriple& t) {
  if (counts_[t]++ > 0) return;
  spo_[t[0]][t[1]].insert(t[2]);
  pos_[t[1]][t[2]].insert(t[0]);
  osp_[t[2]][t[0]].insert(t[1]);
}

void Store::erase(const IdTriple& t) {
  auto it = counts_.find(t);
  if (it == counts_.end()) return;
  if (--it->second > 0) return;
  counts_.erase(it);
  auto drop = [](Level& level, TermId a, TermId b, TermId c) {
    auto i = level.find(a);
    auto j = i->second.find(b);
    j->second.erase(c);
    if (j->second.empty()) i->second.erase(j);
    if (i->second.empty()) level.erase(i);
  };
  drop(spo_, t[0], t[1], t[2]);
  drop(pos_, t[1], t[2], t[0]);
  drop(osp_, t[2], t[0], t[1]);
}

void Store::replace_file(const std::string& file, const std::vector<Triple>& triples, std::string root,
                         std::uint64_t digest) {
  remove_file(file);
  FileEntry entry{std::move(root), digest, {}};
  entry.triples.reserve(triples.size());
  for (const Triple& t : triples) {
    entry.triples.push_back({intern(t.subject), intern(t.predicate), intern(t.object)});
  }
  std::sort(entry.triples.begin(), entry.triples.end());
  entry.triples.erase(std::unique(entry.triples.begin(), entry.triples.end()), entry.triples.end());
  for (const IdTriple& t : entry.triples) insert(t);
  files_[file] = std::move(entry);
}

bool Store::remove_file(const std::string& file) {
  auto it = files_.find(file);
  if (it == files_.end()) return false;
  for (const IdTriple& t : it->second.triples) erase(t);
  files_.erase(it);
  return true;
}

const std::string* Store::root(const std::string& file) const {
  auto it = files_.find(file);
  return it == files_.end() ? nullptr : &it->second.root;
}

std::optional<std::uint64_t> Store::digest(const std::string& file) const {
  auto it = files_.find(file);
  if (it == files_.end()) return std::nullopt;
  return it->second.digest;
}

std::vector<Triple> Store::triples_of(const std::string& file) const {
  std::vector<Triple> out;
  auto it = files_.find(file);
  if (it == files_.end()) return out;
  for (const IdTriple& t : it->second.triples) out.push_back({term(t[0]), term(t[1]), term(t[2])});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IdTriple> Store::match(std::optional<TermId> s, std::optional<TermId> p,
                                   std::optional<TermId> o) const {
  std::vector<IdTriple> out;
  if (s && p && o) {
    if (contains({*s, *p, *o})) out.push_back({*s, *p, *o});
    return out;
  }
  // Pick the index whose leading positions are bound.
  if (s) {
    auto i = spo_.find(*s);
    if (i == spo_.end()) return out;
    for (const auto& [pred, objs] : i->second) {
      if (p && pred != *p) continue;
      for (TermId obj : objs) {
        if (!o || obj == *o) out.push_back({*s, pred, obj});
      }
    }
    return out;
  }
  if (p) {
    auto i = pos_.find(*p);
    if (i == pos_.end()) return out;
    for (const auto& [obj, subs] : i->second) {
      if (o && obj != *o) continue;
      for (TermId sub : subs) out.push_back({sub, *p, obj});
    }
    return out;
  }
  if (o) {
    auto i = osp_.find(*o);
    if (i == osp_.end()) return out;
    for (const auto& [sub, preds] : i->second) {
      for (TermId pred : preds) out.push_back({sub, pred, *o});
    }
    return out;
  }
  out.reserve(counts_.size());
  for (const auto& [t, count] : counts_) out.push_back(t);
  return out;
}

std::vector<Term> Store::objects(const Term& subject, std::string_view predicate) const {
  std::vector<Term> out;
  auto s = lookup(subject);
  auto p = lookup(Term::iri(std::string(predicate)));
  if (!s || !p) return out;
  for (const IdTriple& t : match(s, p, std::nullopt)) out.push_back(term(t[2]));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Term> Store::object(const Term& subject, std::string_view predicate) const {
  auto all = objects(subject, predicate);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<Term> Store::subjects(std::string_view predicate, const Term& object) const {
  std::vector<Term> out;
  auto p = lookup(Term::iri(std::string(predicate)));
  auto o = lookup(object);
  if (!p || !o) return out;
  for (const IdTriple& t : match(std::nullopt, p, o)) out.push_back(term(t[0]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flexitex
