#include "flexitex/handlers.hpp"
#include "flexitex/highlight.hpp"

#include "support/generators.hpp"
#include "support/listings.hpp"

#include <gtest/gtest.h>

namespace flexitex {
namespace {

std::vector<HighlightSpan> run(const Registry& registry, std::string source) {
  return highlight(tag_document(registry, parse(std::move(source))), registry);
}

std::string category_at(const std::vector<HighlightSpan>& spans, std::size_t offset) {
  for (const auto& s : spans) {
    if (s.span.contains(offset)) return s.category;
  }
  return {};
}

TEST(Highlight, ImportModuleHeadAndReferences) {
  Registry registry = standard_registry();
  const std::string source = "\\importmodule[../background/sets]{sets}";
  auto spans = run(registry, source);
  EXPECT_EQ(category_at(spans, 0), categories::command);
  EXPECT_EQ(category_at(spans, source.find("background")), categories::external_ref);
  EXPECT_EQ(category_at(spans, source.find("{sets}") + 1), categories::external_ref);
  EXPECT_EQ(category_at(spans, source.find('[')), "") << "delimiters stay uncolored";
  for (const auto& s : spans) {
    if (s.category == categories::external_ref) {
      EXPECT_EQ(s.source, "importmodule");
      EXPECT_EQ(s.description, "External references");
    }
  }
}

TEST(Highlight, PlainTextHasNoSpans) {
  EXPECT_TRUE(run(standard_registry(), "Just a paragraph of words, nothing else.\n").empty());
}

TEST(Highlight, UntaggedCommandsGetTheDefaultCategory) {
  auto spans = run(standard_registry(), "see \\emph{this}");
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].span, (SourceSpan{4, 9}));
  EXPECT_EQ(spans[0].category, kCommandCategory);
  EXPECT_EQ(spans[0].description, "Command");
  EXPECT_EQ(spans[0].source, "");
}

TEST(Highlight, DeepestTagWins) {
  Registry registry = standard_registry();
  const std::string source(testing::kDefiniendumListing);
  auto spans = run(registry, source);
  // The for= value sits inside the colored \begin{definition} command.
  EXPECT_EQ(category_at(spans, source.find("for=cart") + 4), categories::definiendum);
  EXPECT_EQ(category_at(spans, source.find("\\symdef") + 3), categories::command);
  EXPECT_EQ(category_at(spans, source.find("{cart}") + 1), categories::symbol_name);
  EXPECT_EQ(category_at(spans, source.find("sets-operations")), categories::module_name);
}

TEST(Highlight, SpansAreSortedDisjointAndInBoundsOnFuzzedInput) {
  Registry registry = standard_registry();
  testing::Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string source = i % 2 ? testing::shuffled_listing(rng) : testing::random_tex_bytes(rng, 300);
    auto spans = run(registry, source);
    std::size_t last_end = 0;
    for (const auto& s : spans) {
      ASSERT_LT(s.span.start, s.span.end);
      ASSERT_GE(s.span.start, last_end);
      ASSERT_LE(s.span.end, source.size());
      last_end = s.span.end;
    }
  }
}

/// (category, source) per byte; empty category where uncolored.
std::vector<std::pair<std::string, std::string>> per_byte(const std::vector<HighlightSpan>& spans, std::size_t size) {
  std::vector<std::pair<std::string, std::string>> out(size);
  for (const auto& s : spans) {
    for (std::size_t i = s.span.start; i < s.span.end; ++i) out[i] = {s.category, s.source};
  }
  return out;
}

TEST(Highlight, RemovingAHandlerRemovesOnlyItsCategories) {
  Registry registry = standard_registry();
  testing::Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    std::string source = testing::shuffled_listing(rng);
    auto full = per_byte(highlight(tag_document(registry, parse(source)), registry), source.size());
    for (const auto& handler : registry.handlers()) {
      Registry reduced = registry.without(handler->id());
      auto fewer = per_byte(highlight(tag_document(reduced, parse(source)), reduced), source.size());
      for (std::size_t b = 0; b < source.size(); ++b) {
        EXPECT_NE(fewer[b].second, handler->id());
        if (full[b] == fewer[b]) continue;
        // A byte may only change where the removed handler colored it, or
        // where its commands fall back to the default category.
        const bool was_owned = full[b].second == handler->id();
        const bool now_default = fewer[b] == std::pair<std::string, std::string>{std::string(kCommandCategory), ""};
        EXPECT_TRUE(was_owned || now_default) << handler->id() << " byte " << b << " of\n" << source;
      }
    }
  }
}

class BadColorHandler : public ExtensionHandler {
 public:
  std::string id() const override { return "bad"; }
  std::vector<std::string> handled_command_names() const override { return {"foo"}; }
  std::vector<std::string> handled_tags() const override { return {"t.bad"}; }
  void add_node_tags(TagContext& context, NodeId command) const override { context.add_tag(command, "t.bad"); }
  std::optional<std::string> syntax_color_uri(std::string_view) const override { return "undeclared.category"; }
};

TEST(Highlight, UndeclaredCategoryIsAHardError) {
  Registry registry;
  registry.add(std::make_shared<BadColorHandler>());
  EXPECT_THROW(run(registry, "\\foo"), ExtensionError);
}

}  // namespace
}  // namespace flexitex
