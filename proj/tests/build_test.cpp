#include "flexitex/build.hpp"

#include "support/temp_dir.hpp"

#include <gtest/gtest.h>

#include <random>

namespace flexitex {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono_literals;

/// The handoff rule restated: pipe when stdout meets stdin, otherwise a file
/// the consumer can read, from the workdir for multi-file producers.
std::optional<BindingKind> expected_binding(const Capabilities& p, const Capabilities& c) {
  if (p.out_stdout && c.in_stdin) return BindingKind::pipe;
  if (!c.in_file) return std::nullopt;
  if (p.out_multi_file) return BindingKind::workdir;
  if (p.out_stdout || p.out_file) return BindingKind::temp_file;
  return std::nullopt;
}

/// Every capability set with at least one input and one output.
std::vector<Capabilities> all_capabilities() {
  std::vector<Capabilities> out;
  for (int in = 1; in < 4; ++in) {
    for (int o = 1; o < 8; ++o) {
      out.push_back({bool(in & 1), bool(in & 2), bool(o & 1), bool(o & 2), bool(o & 4)});
    }
  }
  return out;
}

ProgramHandler program(std::string id, std::vector<std::string> command, Capabilities caps,
                       std::string output_file = {}) {
  ProgramHandler p;
  p.id = std::move(id);
  p.command = std::move(command);
  p.caps = caps;
  p.output_file = std::move(output_file);
  return p;
}

constexpr Capabilities kFileToStdout{false, true, true, false, false};
constexpr Capabilities kStdinToFile{true, false, false, true, false};
constexpr Capabilities kStdinToStdout{true, false, true, false, false};
constexpr Capabilities kFileToFile{false, true, false, true, false};

TEST(Binding, MatchesTheRuleForEveryCapabilityPair) {
  auto caps = all_capabilities();
  ASSERT_EQ(caps.size(), 21u);
  for (const auto& p : caps) {
    for (const auto& c : caps) EXPECT_EQ(choose_binding(p, c), expected_binding(p, c));
  }
  EXPECT_EQ(to_string(BindingKind::temp_file), "temp-file");
}

TEST(Plan, ExhaustiveChainsUpToLengthFour) {
  auto caps = all_capabilities();
  BuildConfig config;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const std::string id = "p" + std::to_string(i);
    config.programs[id] = program(id, {"tool", "{in}", "{out}"}, caps[i]);
  }
  std::vector<std::size_t> chain;
  std::size_t checked = 0;
  auto check = [&] {
    Workflow w{"t", {}};
    for (auto k : chain) w.steps.push_back("p" + std::to_string(k));
    std::optional<std::size_t> broken;
    for (std::size_t i = 0; i + 1 < chain.size() && !broken; ++i) {
      if (!expected_binding(caps[chain[i]], caps[chain[i + 1]])) broken = i;
    }
    try {
      ExecutionPlan pl = plan(w, "/src/doc.tex", config, "/work", "/out");
      ASSERT_FALSE(broken.has_value());
      ASSERT_EQ(pl.bindings.size(), chain.size() - 1);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        ASSERT_EQ(pl.bindings[i].kind, expected_binding(caps[chain[i]], caps[chain[i + 1]]));
      }
      ASSERT_EQ(pl.source_via_stdin, !caps[chain[0]].in_file);
      ASSERT_EQ(pl.artifact_from_stdout, caps[chain.back()].out_stdout);
    } catch (const BuildError& e) {
      ASSERT_TRUE(broken.has_value()) << e.what();
      const std::string what = e.what();
      ASSERT_NE(what.find("'" + w.steps[*broken] + "'"), std::string::npos) << what;
      ASSERT_NE(what.find("'" + w.steps[*broken + 1] + "'"), std::string::npos) << what;
    }
    ++checked;
  };
  auto extend = [&](auto& self, std::size_t length) -> void {
    if (!chain.empty()) check();
    if (chain.size() == length) return;
    for (std::size_t k = 0; k < caps.size(); ++k) {
      chain.push_back(k);
      self(self, length);
      chain.pop_back();
    }
  };
  extend(extend, 4);
  EXPECT_EQ(checked, 21u + 21 * 21 + 21 * 21 * 21 + 21 * 21 * 21 * 21);
}

TEST(Plan, PlaceholdersAndTempFileNames) {
  BuildConfig config;
  config.programs["a"] = program("a", {"a", "{in}", "{jobname}", "{sourcedir}"}, kFileToStdout);
  config.programs["b"] = program("b", {"b", "--in={in}", "--out={out}", "{workdir}"}, kFileToFile, "{jobname}.final");
  ExecutionPlan pl = plan({"t", {"a", "b"}}, "/src/doc.tex", config, "/work", "/out");
  EXPECT_EQ(pl.steps[0].argv, (std::vector<std::string>{"a", "/src/doc.tex", "doc", "/src"}));
  EXPECT_EQ(pl.bindings[0].kind, BindingKind::temp_file);
  EXPECT_EQ(pl.bindings[0].path, "/work/.flexitex-step1-a.tmp");
  EXPECT_TRUE(pl.bindings[0].via_stdout);
  EXPECT_EQ(pl.steps[1].argv,
            (std::vector<std::string>{"b", "--in=/work/.flexitex-step1-a.tmp", "--out=/work/doc.final", "/work"}));
  EXPECT_EQ(pl.artifact, "/work/doc.final");
  EXPECT_EQ(pl.artifact_destination, fs::path("/out/doc.final"));
  EXPECT_THROW(plan({"t", {"a", "nope"}}, "/src/doc.tex", config, "/w", "/o"), BuildError);
  EXPECT_THROW(plan({"t", {}}, "/src/doc.tex", config, "/w", "/o"), BuildError);
}

TEST(Plan, DefaultPdfWorkflowHandsOverThroughTheWorkdir) {
  BuildConfig config = default_build_config();
  ExecutionPlan pl = plan({"pdf+bibtex", config.workflows.at("pdf+bibtex")}, "/src/doc.tex", config, "/w", "/o");
  ASSERT_GE(pl.steps.size(), 2u);
  EXPECT_EQ(pl.steps[0].id, "pdflatex");
  EXPECT_EQ(pl.bindings[0].kind, BindingKind::workdir);
  EXPECT_EQ(pl.artifact, "/w/doc.pdf");
}

TEST(SelectWorkflow, BibliographySelectsBibtex) {
  BuildConfig config = default_build_config();
  EXPECT_EQ(select_workflow("pdf", parse("\\bibliography{refs}"), config).target, "pdf+bibtex");
  EXPECT_EQ(select_workflow("pdf", parse("\\addbibresource{refs.bib}"), config).target, "pdf+bibtex");
  EXPECT_EQ(select_workflow("pdf", parse("no references here"), config).target, "pdf");
  Workflow w = select_workflow("pdf", parse("\\bibliography{refs}"), config);
  EXPECT_NE(std::find(w.steps.begin(), w.steps.end(), "bibtex"), w.steps.end());
  EXPECT_EQ(select_workflow("xhtml", parse(""), config).steps, config.workflows.at("xhtml"));
  EXPECT_EQ(select_workflow("omdoc", parse("\\bibliography{x}"), config).target, "omdoc");
  EXPECT_THROW(select_workflow("docx", parse(""), config), BuildError);
}

TEST(BuildConfig, ParsesProgramsAndWorkflows) {
  auto json = nlohmann::json::parse(R"({
    "programs": [{"id": "upper", "command": ["tr", "a-z", "A-Z"], "input": ["stdin"], "output": ["stdout"],
                  "parser": [{"pattern": "^E(\\d+) (.*)$", "severity": "error", "message": 2, "line": 1}]}],
    "workflows": {"shout": ["upper"]}
  })");
  BuildConfig config = parse_build_config(json);
  const ProgramHandler& p = config.programs.at("upper");
  EXPECT_EQ(p.caps, kStdinToStdout);
  EXPECT_EQ(config.workflows.at("shout"), std::vector<std::string>{"upper"});
  EXPECT_TRUE(config.programs.count("pdflatex")) << "defaults are kept";
  EXPECT_EQ(parse_build_config(nlohmann::json::object({{"programs", nlohmann::json::array({to_json(p)})}}))
                .programs.at("upper")
                .caps,
            p.caps);

  auto found = p.parse_output("E12 bad thing\nfine\n");
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].severity, Severity::error);
  EXPECT_EQ(found[0].message, "bad thing");
  EXPECT_EQ(found[0].line, 12u);
}

TEST(BuildConfig, SchemaErrors) {
  auto bad = [](const char* text) { return parse_build_config(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad("[]"), BuildError);
  EXPECT_THROW(bad(R"({"programs": {}})"), BuildError);
  EXPECT_THROW(bad(R"({"programs": [{"command": ["x"], "input": ["file"], "output": ["file"]}]})"), BuildError);
  EXPECT_THROW(bad(R"({"programs": [{"id": "x", "command": [], "input": ["file"], "output": ["file"]}]})"),
               BuildError);
  EXPECT_THROW(bad(R"({"programs": [{"id": "x", "command": ["x"], "input": ["disk"], "output": ["file"]}]})"),
               BuildError);
  EXPECT_THROW(bad(R"({"programs": [{"id": "x", "command": ["x"], "input": [], "output": ["file"]}]})"),
               BuildError);
  EXPECT_THROW(bad(R"j({"programs": [{"id": "x", "command": ["x"], "input": ["file"], "output": ["file"],
                       "parser": [{"pattern": "(", "severity": "error"}]}]})j"),
               BuildError);
  EXPECT_THROW(bad(R"j({"programs": [{"id": "x", "command": ["x"], "input": ["file"], "output": ["file"],
                       "parser": [{"pattern": "(a)", "severity": "error", "message": 2}]}]})j"),
               BuildError);
  EXPECT_THROW(bad(R"({"workflows": {"w": ["nonexistent"]}})"), BuildError);
}

struct Sandbox {
  testing::TempDir dir;
  fs::path source;
  fs::path workdir() const { return dir.path() / "work"; }
  fs::path outdir() const { return dir.path() / "out"; }

  explicit Sandbox(std::string_view content) { source = dir.write("src/doc.tex", content); }
};

std::string random_payload(std::size_t size, unsigned seed) {
  std::mt19937 rng(seed);
  std::string out(size, '\0');
  for (auto& c : out) c = static_cast<char>(rng() & 0xff);
  return out;
}

TEST(Execute, ThreeStepMockPipelinePreservesBytes) {
  for (unsigned seed = 0; seed < 4; ++seed) {
    const std::string payload = random_payload(seed == 0 ? 0 : 70000 * seed, seed);
    Sandbox box(payload);
    BuildConfig config;
    config.programs["read"] = program("read", {"cat", "{in}"}, kFileToStdout);
    config.programs["store"] = program("store", {"sh", "-c", "cat > \"$1\"", "sh", "{out}"}, kStdinToFile, "{jobname}.mid");
    config.programs["emit"] = program("emit", {"cat", "{in}"}, kFileToStdout, "{jobname}.bin");
    ExecutionPlan pl = plan({"mock", {"read", "store", "emit"}}, box.source, config, box.workdir(), box.outdir());
    ASSERT_EQ(pl.bindings[0].kind, BindingKind::pipe);
    ASSERT_EQ(pl.bindings[1].kind, BindingKind::temp_file);
    BuildResult r = execute(pl, config);
    ASSERT_TRUE(r.success) << (r.diagnostics.empty() ? "" : r.diagnostics[0].message);
    ASSERT_EQ(r.artifacts, std::vector<fs::path>{box.outdir() / "doc.bin"});
    EXPECT_EQ(testing::read_file(r.artifacts[0]), payload);
    EXPECT_FALSE(fs::exists(box.workdir())) << "temporaries are removed";
  }
}

TEST(Execute, SourceOverStdinAndKeepTemps) {
  Sandbox box("hello\n");
  BuildConfig config;
  config.programs["up"] = program("up", {"tr", "a-z", "A-Z"}, kStdinToStdout, "{jobname}.up");
  config.programs["copy"] = program("copy", {"cp", "{in}", "{out}"}, kFileToFile, "{jobname}.txt");
  ExecutionPlan pl = plan({"t", {"up", "copy"}}, box.source, config, box.workdir(), box.outdir());
  EXPECT_TRUE(pl.source_via_stdin);
  BuildResult r = execute(pl, config, {.keep_temps = true});
  ASSERT_TRUE(r.success);
  EXPECT_EQ(testing::read_file(box.outdir() / "doc.txt"), "HELLO\n");
  EXPECT_TRUE(fs::exists(box.workdir() / ".flexitex-step1-up.tmp"));
}

TEST(Execute, OutputRulesBecomeSourceDiagnostics) {
  const std::string source = "line one\nline two\nline three\n";
  Sandbox box(source);
  BuildConfig config;
  ProgramHandler p = program("mock",
                             {"sh", "-c", "printf 'noise\\nWARN 3: careful here\\n' >&2; cat \"$1\"", "sh", "{in}"},
                             kFileToStdout, "{jobname}.out");
  p.parser.push_back({"^WARN (\\d+): (.*)$", Severity::warning, 2, 1});
  config.programs["mock"] = p;
  BuildResult r = execute(plan({"t", {"mock"}}, box.source, config, box.workdir(), box.outdir()), config,
                          {.diagnostic_file = "doc.tex"});
  ASSERT_TRUE(r.success);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  const Diagnostic& d = r.diagnostics[0];
  EXPECT_EQ(d.severity, Severity::warning);
  EXPECT_EQ(d.code, codes::build_output);
  EXPECT_EQ(d.message, "mock: careful here");
  EXPECT_EQ(d.file, "doc.tex");
  EXPECT_EQ(d.span, (SourceSpan{source.find("line three"), source.find("line three") + 10}));
}

TEST(Execute, FailingStepStopsThePipeline) {
  Sandbox box("x");
  BuildConfig config;
  config.programs["one"] = program("one", {"cat", "{in}"}, kFileToStdout);
  config.programs["two"] = program("two", {"sh", "-c", "echo 'l.1 broken' >&2; exit 3"}, kStdinToStdout);
  config.programs["three"] = program("three", {"sh", "-c", "touch \"$1\"", "sh", "{out}"}, kStdinToFile, "marker");
  ExecutionPlan pl = plan({"t", {"one", "two", "three"}}, box.source, config, box.workdir(), box.outdir());
  BuildResult r = execute(pl, config, {.keep_temps = true});
  EXPECT_FALSE(r.success);
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_EQ(r.steps[1].exit_status, 3);
  EXPECT_FALSE(fs::exists(box.workdir() / "marker"));
  EXPECT_TRUE(r.artifacts.empty());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, codes::build_failed);
  EXPECT_NE(r.diagnostics[0].message.find("two"), std::string::npos);
}

TEST(Execute, MissingArtifactIsReported) {
  Sandbox box("x");
  BuildConfig config;
  config.programs["noop"] = program("noop", {"true"}, kFileToFile, "never.pdf");
  BuildResult r = execute(plan({"t", {"noop"}}, box.source, config, box.workdir(), box.outdir()), config);
  EXPECT_FALSE(r.success);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, codes::build_failed);
}

TEST(Execute, UnstartableProgramThrows) {
  Sandbox box("x");
  BuildConfig config;
  config.programs["ghost"] = program("ghost", {"/nonexistent/tool-xyz", "{in}"}, kFileToStdout);
  ExecutionPlan pl = plan({"t", {"ghost"}}, box.source, config, box.workdir(), box.outdir());
  EXPECT_THROW(execute(pl, config), BuildError);
  EXPECT_FALSE(fs::exists(box.workdir()));
}

TEST(Debouncer, FiresOnceAfterQuiet) {
  Debouncer d(100ms);
  const auto t0 = Debouncer::clock::time_point{};
  EXPECT_FALSE(d.fire(t0 + 1s));
  d.touch(t0);
  d.touch(t0 + 50ms);
  EXPECT_TRUE(d.pending());
  EXPECT_FALSE(d.fire(t0 + 120ms));
  EXPECT_TRUE(d.fire(t0 + 150ms));
  EXPECT_FALSE(d.pending());
  EXPECT_FALSE(d.fire(t0 + 500ms));
}

}  // namespace
}  // namespace flexitex
