#include "flexitex/query.hpp"
#include "flexitex/vocab.hpp"

#include "support/join_oracle.hpp"

#include <gtest/gtest.h>

namespace flexitex {
namespace {

Store store_of(const std::vector<Triple>& triples) {
  Store store;
  store.replace_file("a", triples, "urn:root", 1);
  return store;
}

TEST(QueryParse, PrefixedNamesLiteralsAndSeparators) {
  Query q = parse_query("?t rdf:type oo:Theory; ?t rdf:id \"a \\\"b\\\"\" .\n?t IDE:arity -3");
  ASSERT_EQ(q.patterns.size(), 3u);
  EXPECT_EQ(q.patterns[0].terms[2].term, Term::iri(vocab::oo_theory));
  EXPECT_EQ(q.patterns[1].terms[2].term, Term::literal("a \"b\""));
  EXPECT_EQ(q.patterns[2].terms[2].term, Term::integer(-3));
  EXPECT_EQ(q.variables, std::vector<std::string>{"t"});
  EXPECT_FALSE(q.projected);
}

TEST(QueryParse, SelectRestrictsAndOrdersColumns) {
  Query q = parse_query("SELECT ?b ?a WHERE { ?a <urn:p> ?b . ?b <urn:q> ?c }");
  EXPECT_TRUE(q.projected);
  EXPECT_EQ(q.variables, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(q.patterns.size(), 2u);
}

TEST(QueryParse, ErrorsAreReported) {
  EXPECT_THROW(parse_query("?a ?b"), QueryError);
  EXPECT_THROW(parse_query("?a ?b ?c ?d"), QueryError);
  EXPECT_THROW(parse_query("?a nope:x ?c"), QueryError);
  EXPECT_THROW(parse_query("?a <urn:p> \"open"), QueryError);
  EXPECT_THROW(parse_query("SELECT ?z WHERE ?a <urn:p> ?b"), QueryError);
  EXPECT_THROW(parse_query("SELECT WHERE ?a <urn:p> ?b"), QueryError);
  EXPECT_THROW(parse_query("{ ?a <urn:p> ?b"), QueryError);
}

TEST(QueryEval, EmptyConjunctionHasOneEmptySolution) {
  QueryResult r = evaluate(store_of({}), parse_query(""));
  EXPECT_TRUE(r.variables.empty());
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.rows[0].empty());
}

TEST(QueryEval, UnsatisfiableHasNoSolutions) {
  Store store = store_of({{Term::iri("urn:a"), Term::iri("urn:p"), Term::iri("urn:b")}});
  EXPECT_TRUE(evaluate(store, parse_query("?x <urn:p> ?y; ?y <urn:p> ?z")).rows.empty());
  EXPECT_TRUE(evaluate(store, parse_query("?x <urn:unknown> ?y")).rows.empty());
  EXPECT_EQ(evaluate(store, parse_query("<urn:a> <urn:p> <urn:b>")).rows.size(), 1u);
}

TEST(QueryEval, RepeatedVariableInOnePattern) {
  Store store = store_of({{Term::iri("urn:a"), Term::iri("urn:p"), Term::iri("urn:a")},
                          {Term::iri("urn:a"), Term::iri("urn:p"), Term::iri("urn:b")}});
  auto r = evaluate(store, parse_query("?x <urn:p> ?x"));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][0], Term::iri("urn:a"));
}

TEST(QueryEval, IntegersAndStringsAreDistinct) {
  Store store = store_of({{Term::iri("urn:a"), Term::iri("urn:p"), Term::integer(1)},
                          {Term::iri("urn:b"), Term::iri("urn:p"), Term::literal("1")}});
  auto r = evaluate(store, parse_query("?x <urn:p> 1"));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0][0], Term::iri("urn:a"));
}

TEST(QueryEval, MatchesNestedLoopOracle) {
  testing::Rng rng(51);
  for (int s = 0; s < 60; ++s) {
    auto triples = testing::random_triples(rng);
    // Split ownership across two files to exercise shared triples.
    std::vector<Triple> first(triples.begin(), triples.begin() + (triples.size() + 1) / 2);
    Store store;
    store.replace_file("one", first, "urn:r1", 1);
    store.replace_file("two", triples, "urn:r2", 2);
    for (int k = 0; k < 30; ++k) {
      const std::string text = testing::random_query_text(rng);
      Query q = parse_query(text);
      EXPECT_EQ(evaluate(store, q).rows, testing::nested_loop_join(triples, q)) << text;
    }
  }
}

}  // namespace
}  // namespace flexitex
