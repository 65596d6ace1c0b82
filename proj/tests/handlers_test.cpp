#include "flexitex/handlers.hpp"
#include "flexitex/index.hpp"
#include "flexitex/modules.hpp"
#include "flexitex/validate.hpp"
#include "flexitex/vocab.hpp"

#include "support/listings.hpp"
#include "support/semantic_oracle.hpp"
#include "support/temp_dir.hpp"
#include "support/workspace_gen.hpp"

#include <gtest/gtest.h>

#include <memory>

namespace flexitex {
namespace {

struct Project {
  testing::TempDir dir;
  std::unique_ptr<Workspace> workspace;
  Registry registry = standard_registry();
  std::unique_ptr<Indexer> indexer;

  explicit Project(const testing::FileMap& files) {
    testing::write_files(files, dir.path());
    workspace = std::make_unique<Workspace>(dir.path());
    indexer = std::make_unique<Indexer>(*workspace, registry);
  }

  std::vector<std::vector<Term>> rows(std::string_view q) { return indexer->query(q).rows; }
  std::vector<Diagnostic> lint(const std::string& file) { return validate(*indexer, file); }
};

std::vector<std::string> codes_of(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

TEST(ModuleHandler, TheoryNodeCarriesTheModuleId) {
  Project p(testing::FileMap{{"ops.tex", std::string(testing::kDefiniendumListing)}});
  p.indexer->get_index("ops.tex");
  auto rows = p.rows("?t rdf:type oo:Theory; ?t rdf:id ?id");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::literal("sets-operations"));
  EXPECT_TRUE(p.lint("ops.tex").empty());
}

TEST(ModuleHandler, MissingIdWarnsButStillIndexes) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}\n\\symdef{x}{y}\n\\end{module}\n"}});
  p.indexer->get_index("a.tex");
  auto rows = p.rows("?t rdf:type oo:Theory; ?t rdf:id ?id; ?t IDE:anonymous 1; ?t IDE:hasSymbol ?s");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1].value.rfind("anonymous:a.tex:", 0), 0u) << rows[0][1].value;
  EXPECT_TRUE(p.indexer->module_ids("a.tex").empty());
  EXPECT_EQ(codes_of(p.lint("a.tex")), std::vector<std::string>{std::string(codes::missing_module_id)});
}

TEST(ModuleHandler, TwoModulesGiveTwoHasModuleLinks) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=one]\\end{module}\n\\begin{module}[id=two]\\end{module}\n"}});
  const std::string root = p.indexer->get_index("a.tex");
  auto rows = p.rows("<" + root + "> IDE:hasModule ?m; ?m rdf:id ?id");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(p.indexer->module_ids("a.tex"), (std::vector<std::string>{"one", "two"}));
}

TEST(SymdefHandler, HasSymbolLinkFromTheory) {
  Project p(testing::FileMap{{"ops.tex", std::string(testing::kDefiniendumListing)}});
  p.indexer->get_index("ops.tex");
  auto rows = p.rows("?t rdf:id \"sets-operations\"; ?t IDE:hasSymbol ?s; ?s IDE:name ?n; ?s IDE:arity ?a");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][2], Term::literal("cart"));
  EXPECT_EQ(rows[0][3], Term::integer(0));
}

TEST(SymdefHandler, ArityAndPresentation) {
  Project p(testing::FileMap{{"r.tex", std::string(testing::kRealsListing)}});
  p.indexer->get_index("r.tex");
  auto rows = p.rows("?s IDE:name \"greater\"; ?s IDE:arity ?a; ?s IDE:presentation ?p");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::integer(2));
  EXPECT_EQ(rows[0][2], Term::literal("#1>#2"));
}

TEST(SymdefHandler, NoOptionsWarnsAndIsNotIndexed) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=m]\n\\symdef\n\\end{module}\n"}});
  p.indexer->get_index("a.tex");
  EXPECT_TRUE(p.rows("?s rdf:type IDE:Symbol").empty());
  EXPECT_EQ(codes_of(p.lint("a.tex")), std::vector<std::string>{std::string(codes::symdef_missing_name)});
}

TEST(SymdefHandler, OutsideModuleWarnsAndHangsOffTheRoot) {
  Project p(testing::FileMap{{"a.tex", "\\symdef{loose}{L}\n"}});
  const std::string root = p.indexer->get_index("a.tex");
  auto rows = p.rows("<" + root + "> IDE:hasSymbol ?s; ?s IDE:name ?n");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::literal("loose"));
  EXPECT_EQ(codes_of(p.lint("a.tex")), std::vector<std::string>{std::string(codes::symdef_outside_module)});
}

TEST(DefinitionHandler, ForAndPartOf) {
  Project p(testing::FileMap{{"ops.tex", std::string(testing::kDefiniendumListing)}});
  p.indexer->get_index("ops.tex");
  auto rows = p.rows("?d rdf:type oo:Definition; ?d IDE:for ?f; ?d oo:partOf ?t; ?t rdf:id ?id");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::literal("cart"));
  EXPECT_EQ(rows[0][3], Term::literal("sets-operations"));
}

TEST(DefinitionHandler, TitleAndFlattenedText) {
  Project p(testing::FileMap{{"r.tex", std::string(testing::kRealsListing)}});
  p.indexer->get_index("r.tex");
  auto rows = p.rows("?d IDE:title ?t; ?d IDE:text ?x");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::literal("Positive Real Numbers"));
  EXPECT_EQ(rows[0][2], Term::literal("The set is the set of x such that x 0"));
}

TEST(DefinitionHandler, EmptyBodyHasEmptyText) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=m]\\begin{definition}[for=x]\\end{definition}\\end{module}"}});
  p.indexer->get_index("a.tex");
  auto rows = p.rows("?d IDE:text ?x");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], Term::literal(""));
}

TEST(DefinitionHandler, ForListGivesOneLinkPerName) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=m]\\begin{definition}[for={a, b}]x\\end{definition}\\end{module}"}});
  p.indexer->get_index("a.tex");
  auto rows = p.rows("?d IDE:for ?f");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][1], Term::literal("a"));
  EXPECT_EQ(rows[1][1], Term::literal("b"));
}

TEST(DefinitionHandler, MissingForWarns) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=m]\\begin{definition}[id=d]text\\end{definition}\\end{module}"}});
  p.indexer->get_index("a.tex");
  EXPECT_EQ(p.rows("?d rdf:type oo:Definition").size(), 1u);
  EXPECT_EQ(codes_of(p.lint("a.tex")), std::vector<std::string>{std::string(codes::definition_missing_for)});
}

TEST(ImportHandler, ImportNodeCarriesFileAndId) {
  Project p(testing::FileMap{{"math/r.tex", std::string(testing::kRealsListing)}});
  p.indexer->get_index("math/r.tex");
  auto rows = p.rows(
      "?t IDE:hasImport ?i; ?i rdf:type IDE:importModuleCommand; ?i IDE:moduleFile ?f; ?i IDE:resolvedFile ?r; "
      "?i IDE:moduleId ?m");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][2], Term::literal("../background/sets"));
  EXPECT_EQ(rows[0][3], Term::literal("background/sets.tex"));
  EXPECT_EQ(rows[0][4], Term::literal("sets"));
}

TEST(ImportHandler, HighlightCategoriesMatchTheAppendix) {
  Registry registry = standard_registry();
  const ExtensionHandler* h = registry.handler_for_command("importmodule");
  auto cats = h->highlighting_uris();
  ASSERT_EQ(cats.size(), 2u);
  EXPECT_EQ(cats[0].uri, "kwarc.info.mkmide.latex.syntaxhighlighting.command");
  EXPECT_EQ(cats[0].description, "Command");
  EXPECT_EQ(cats[1].uri, "kwarc.info.mkmide.latex.syntaxhighlighting.externalRef");
  EXPECT_EQ(cats[1].description, "External references");
  EXPECT_EQ(h->syntax_color_uri(tags::import_command), std::string(categories::command));
  EXPECT_EQ(h->syntax_color_uri(tags::import_file), std::string(categories::external_ref));
  EXPECT_EQ(h->syntax_color_uri(tags::import_id), std::string(categories::external_ref));
}

TEST(Summaries, ModuleSymbolPairsMatchTheAstOracle) {
  testing::Rng rng(21);
  for (int round = 0; round < 25; ++round) {
    auto files = testing::random_workspace(rng);
    Project p(files);
    testing::SemanticOracle oracle(files);
    for (const auto& [file, content] : files) {
      p.indexer->get_index(file);
      FileSummary summary = summarize(p.indexer->store(), file);
      std::set<std::pair<std::string, std::string>> got;
      for (const auto& s : summary.document.symbols) got.emplace("", s.name);
      for (const auto& m : summary.modules) {
        for (const auto& s : m.symbols) got.emplace(m.anonymous ? "" : m.id, s.name);
      }
      EXPECT_EQ(got, oracle.module_symbols(file)) << file << "\n" << content;
    }
  }
}

}  // namespace
}  // namespace flexitex
