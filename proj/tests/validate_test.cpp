#include "flexitex/handlers.hpp"
#include "flexitex/index.hpp"
#include "flexitex/validate.hpp"

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
  std::vector<Diagnostic> lint(const std::string& file) { return validate(*indexer, file); }
};

std::vector<Diagnostic> with_code(const std::vector<Diagnostic>& ds, std::string_view code) {
  std::vector<Diagnostic> out;
  for (const auto& d : ds) {
    if (d.code == code) out.push_back(d);
  }
  return out;
}

TEST(Validate, TransitivelyRedundantImport) {
  const std::string a =
      "\\begin{module}[id=a]\n  \\importmodule[b]{b}\n  \\importmodule[c]{c}\n\\end{module}\n";
  Project p(testing::FileMap{{"a.tex", a},
             {"b.tex", "\\begin{module}[id=b]\n  \\importmodule[c]{c}\n\\end{module}\n"},
             {"c.tex", "\\begin{module}[id=c]\n\\end{module}\n"}});
  auto ds = p.lint("a.tex");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, codes::redundant_import);
  EXPECT_EQ(ds[0].severity, Severity::warning);
  EXPECT_EQ(ds[0].span.start, a.find("\\importmodule[c]"));
  EXPECT_EQ(lint_exit_code(ds), 0);
  EXPECT_TRUE(p.lint("b.tex").empty());
}

TEST(Validate, MissingFileIsAnErrorOnTheFileReference) {
  const std::string a = "\\begin{module}[id=a]\n  \\importmodule[ghost]{m}\n\\end{module}\n";
  Project p(testing::FileMap{{"a.tex", a}});
  auto ds = p.lint("a.tex");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, codes::missing_file);
  EXPECT_EQ(ds[0].severity, Severity::error);
  EXPECT_EQ(ds[0].span, (SourceSpan{a.find("ghost"), a.find("ghost") + 5}));
  EXPECT_NE(ds[0].message.find("does not exist"), std::string::npos);
  EXPECT_EQ(lint_exit_code(ds), 1);
}

TEST(Validate, UnknownModuleIdIsAnError) {
  const std::string a = "\\begin{module}[id=a]\n  \\importmodule[b]{nosuch}\n\\end{module}\n";
  Project p(testing::FileMap{{"a.tex", a}, {"b.tex", "\\begin{module}[id=b]\\end{module}"}});
  auto ds = p.lint("a.tex");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, codes::unknown_module_id);
  EXPECT_EQ(ds[0].span.start, a.find("nosuch"));
}

TEST(Validate, CleanListingWithStubbedDependency) {
  const std::string sets = "\\begin{module}[id=sets]\n  \\symdef{inset}[2]{#1\\in#2}\n\\end{module}\n";
  Project p(testing::FileMap{{"math/reals.tex", std::string(testing::kAutocompleteListing)},
                             {"math/plain.tex", std::string(testing::kRealsListing)},
                             {"background/sets.tex", sets}});
  EXPECT_TRUE(p.lint("math/reals.tex").empty());
  EXPECT_TRUE(p.lint("background/sets.tex").empty());
  // The variant without for= only gets the definiendum warning.
  auto ds = p.lint("math/plain.tex");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, codes::definition_missing_for);
  EXPECT_EQ(lint_exit_code(ds), 0);
}

TEST(Validate, ListingWithoutItsDependencyReportsTheMissingFile) {
  Project p(testing::FileMap{{"math/reals.tex", std::string(testing::kAutocompleteListing)}});
  auto ds = p.lint("math/reals.tex");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, codes::missing_file);
}

TEST(Validate, ImportCycleIsReportedOncePerCycle) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=a]\\importmodule[b]{b}\\end{module}"},
             {"b.tex", "\\begin{module}[id=b]\\importmodule[c]{c}\\end{module}"},
             {"c.tex", "\\begin{module}[id=c]\\importmodule[a]{a}\\end{module}"}});
  std::size_t cycles = 0;
  for (const std::string f : {"a.tex", "b.tex", "c.tex"}) {
    auto ds = p.lint(f);
    cycles += with_code(ds, codes::import_cycle).size();
    EXPECT_TRUE(with_code(ds, codes::redundant_import).empty());
  }
  EXPECT_EQ(cycles, 1u);
  EXPECT_EQ(with_code(p.lint("a.tex"), codes::import_cycle).size(), 1u) << "reported at the smallest edge";
}

TEST(Validate, SelfImportTerminates) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=a]\\importmodule[a]{a}\\end{module}"}});
  auto ds = p.lint("a.tex");
  EXPECT_EQ(with_code(ds, codes::import_cycle).size(), 1u);
}

TEST(Validate, ParseAndEnvironmentDiagnosticsAreIncluded) {
  Project p(testing::FileMap{{"a.tex", "\\begin{module}[id=a]\n{unclosed\n"}});
  auto ds = p.lint("a.tex");
  EXPECT_FALSE(with_code(ds, codes::env_mismatch).empty());
  EXPECT_FALSE(with_code(ds, codes::unclosed_group).empty());
  EXPECT_EQ(lint_exit_code(ds), 1);
}

TEST(Validate, SortedRegisteredAndRepeatable) {
  testing::Rng rng(31);
  for (int round = 0; round < 10; ++round) {
    auto files = testing::random_workspace(rng);
    Project p(files);
    for (const auto& [file, content] : files) {
      auto first = p.lint(file);
      EXPECT_TRUE(std::is_sorted(first.begin(), first.end(), diagnostic_less));
      for (const auto& d : first) {
        EXPECT_TRUE(codes::is_registered(d.code)) << d.code;
        EXPECT_FALSE(d.message.empty());
        EXPECT_EQ(d.file, file);
      }
      EXPECT_EQ(p.lint(file), first);
    }
  }
}

/// Maps each diagnostic with `code` to the import command containing it.
std::set<testing::Location> located(const testing::SemanticOracle& oracle, const testing::FileMap& files,
                                    const std::vector<Diagnostic>& ds, std::string_view code) {
  std::set<testing::Location> out;
  for (const auto& d : ds) {
    if (d.code != code) continue;
    const testing::OracleFile* f = oracle.file(d.file);
    std::optional<std::size_t> start;
    auto visit = [&](const testing::OracleModule& m) {
      for (const auto& imp : m.imports) {
        if (imp.span.start <= d.span.start && d.span.start < imp.span.end) start = imp.span.start;
      }
    };
    visit(f->document);
    for (const auto& m : f->modules) visit(m);
    EXPECT_TRUE(start.has_value()) << d.message << " in\n" << files.at(d.file);
    if (start) out.emplace(d.file, *start);
  }
  return out;
}

TEST(Validate, ImportChecksMatchTheAstOracle) {
  testing::Rng rng(32);
  for (int round = 0; round < 20; ++round) {
    auto files = testing::random_workspace(rng);
    Project p(files);
    testing::SemanticOracle oracle(files);
    std::vector<Diagnostic> all;
    for (const auto& [file, content] : files) {
      auto ds = p.lint(file);
      all.insert(all.end(), ds.begin(), ds.end());
    }
    EXPECT_EQ(located(oracle, files, all, codes::missing_file), oracle.missing_files());
    EXPECT_EQ(located(oracle, files, all, codes::unknown_module_id), oracle.unknown_module_ids());
    EXPECT_EQ(located(oracle, files, all, codes::redundant_import), oracle.redundant_imports());
  }
}

}  // namespace
}  // namespace flexitex
