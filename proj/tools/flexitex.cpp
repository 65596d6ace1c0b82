#include "flexitex/build.hpp"
#include "flexitex/complete.hpp"
#include "flexitex/handlers.hpp"
#include "flexitex/highlight.hpp"
#include "flexitex/index.hpp"
#include "flexitex/json_output.hpp"
#include "flexitex/ntriples.hpp"
#include "flexitex/search.hpp"
#include "flexitex/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flexitex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitErrors = 1;
constexpr int kExitFailure = 2;

struct Options {
  std::string root;
  bool json = false;
};

class Session {
 public:
  explicit Session(const fs::path& root)
      : workspace_(root), registry_(standard_registry()), indexer_(workspace_, registry_) {}

  Workspace& workspace() { return workspace_; }
  Indexer& indexer() { return indexer_; }
  const Registry& registry() const { return registry_; }

  std::string file_arg(const std::string& path) const { return workspace_.relative(path); }

  /// Workspace files named by `paths`: files as given, directories expanded
  /// to the workspace files below them; every workspace file when empty.
  std::vector<std::string> expand(const std::vector<std::string>& paths) const {
    if (paths.empty()) return workspace_.files();
    std::set<std::string> out;
    for (const auto& path : paths) {
      if (fs::is_directory(path)) {
        std::string prefix = workspace_.relative(path);
        if (prefix == ".") prefix.clear();
        if (!prefix.empty() && prefix.back() != '/') prefix += '/';
        for (const auto& f : workspace_.files()) {
          if (f.compare(0, prefix.size(), prefix) == 0) out.insert(f);
        }
      } else {
        out.insert(workspace_.relative(path));
      }
    }
    return {out.begin(), out.end()};
  }

 private:
  Workspace workspace_;
  Registry registry_;
  Indexer indexer_;
};

/// Workspace root: --root, else the nearest directory holding flexitex.json
/// above the first path, else the cwd when it contains that path, else the
/// path's directory.
fs::path find_root(const Options& options, const std::vector<std::string>& paths) {
  if (!options.root.empty()) return options.root;
  const fs::path cwd = fs::current_path();
  fs::path start = paths.empty() ? cwd : fs::absolute(paths.front()).lexically_normal();
  if (!fs::is_directory(start)) start = start.parent_path();
  for (fs::path dir = start;; dir = dir.parent_path()) {
    if (fs::exists(dir / "flexitex.json")) return dir;
    if (dir == dir.parent_path()) break;
  }
  const fs::path inside = start.lexically_relative(cwd);
  if (!inside.empty() && *inside.begin() != "..") return cwd;
  return start;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
  line_start = (line_start == std::string_view::npos || offset == 0) ? 0 : line_start + 1;
  return {line, offset - line_start + 1};
}

void print_diagnostics(Session& session, const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    std::string location = d.file;
    if (!d.file.empty() && session.workspace().exists(d.file)) {
      auto [line, column] = line_column(session.workspace().content(d.file), d.span.start);
      location += ":" + std::to_string(line) + ":" + std::to_string(column);
    }
    std::cerr << location << ": " << to_string(d.severity) << ": " << d.message << " [" << d.code << "]\n";
  }
}

int exit_for(const std::vector<Diagnostic>& diagnostics) { return lint_exit_code(diagnostics); }

void print_json(const json& value) { std::cout << value.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int run_parse(const Options& options, const std::string& path) {
  Session session(find_root(options, {path}));
  const std::string file = session.file_arg(path);
  auto doc = session.indexer().document(file);
  if (options.json) {
    print_json({{"file", file}, {"ast", ast_to_json(*doc)}, {"diagnostics", to_json(doc->diagnostics)}});
  } else {
    for (NodeId id = 0; id < doc->nodes.size(); ++id) {
      const Node& n = doc->nodes[id];
      std::size_t depth = 0;
      for (NodeId p = n.parent; p != no_node; p = doc->nodes[p].parent) ++depth;
      std::cout << std::string(depth * 2, ' ') << to_string(n.kind);
      if (n.kind == NodeKind::command) std::cout << " \\" << n.name;
      if (n.kind == NodeKind::option) std::cout << (n.delimiter == Delimiter::brace ? " {}" : " []");
      if (n.is_leaf()) std::cout << " " << json(n.text).dump();
      std::cout << " [" << n.span.start << "," << n.span.end << ")";
      for (const auto& tag : n.tags) std::cout << " #" << tag;
      std::cout << '\n';
    }
  }
  print_diagnostics(session, doc->diagnostics);
  return exit_for(doc->diagnostics);
}

int run_highlight(const Options& options, const std::string& path, bool ansi) {
  Session session(find_root(options, {path}));
  const std::string file = session.file_arg(path);
  auto doc = session.indexer().document(file);
  auto spans = highlight(*doc, session.registry());
  if (options.json) {
    print_json(to_json(spans));
  } else if (ansi) {
    static const char* const palette[] = {"\x1b[34m", "\x1b[32m", "\x1b[35m", "\x1b[33m", "\x1b[36m", "\x1b[31m"};
    std::map<std::string, std::size_t> colors;
    std::size_t pos = 0;
    for (const auto& s : spans) {
      std::cout << doc->source.substr(pos, s.span.start - pos);
      auto [it, inserted] = colors.try_emplace(s.category, colors.size() % std::size(palette));
      std::cout << palette[it->second] << doc->source.substr(s.span.start, s.span.length()) << "\x1b[0m";
      pos = s.span.end;
    }
    std::cout << doc->source.substr(pos);
    if (!doc->source.empty() && doc->source.back() != '\n') std::cout << '\n';
  } else {
    for (const auto& s : spans) {
      std::cout << s.span.start << '\t' << s.span.end << '\t' << s.category << '\t'
                << json(std::string(doc->text_of(s.span))).dump() << '\n';
    }
  }
  return kExitOk;
}

int run_lint(const Options& options, const std::vector<std::string>& paths) {
  Session session(find_root(options, paths));
  std::vector<Diagnostic> all;
  for (const auto& file : session.expand(paths)) {
    auto found = validate(session.indexer(), file);
    all.insert(all.end(), found.begin(), found.end());
  }
  sort_unique(all);
  if (options.json) print_json(to_json(all));
  else print_diagnostics(session, all);
  return exit_for(all);
}

int run_complete(const Options& options, const std::string& path, std::size_t offset,
                 const std::optional<std::string>& prefix) {
  Session session(find_root(options, {path}));
  auto items = complete_at(session.indexer(), session.file_arg(path), offset, prefix);
  if (options.json) {
    print_json(to_json(items));
  } else {
    for (const auto& item : items) {
      std::cout << item.label << '\t' << to_string(item.kind);
      if (item.detail) std::cout << '\t' << *item.detail;
      std::cout << '\n';
    }
  }
  return kExitOk;
}

int run_index(const Options& options, const std::vector<std::string>& paths) {
  Session session(find_root(options, paths));
  json files = json::array();
  std::size_t total = 0;
  for (const auto& file : session.expand(paths)) {
    const std::string root = session.indexer().get_index(file);
    const std::size_t count = session.indexer().store().triples_of(file).size();
    total += count;
    files.push_back({{"file", file}, {"root", root}, {"triples", count}});
  }
  if (options.json) {
    print_json({{"files", files}, {"total", total}});
  } else {
    for (const auto& f : files) {
      std::cout << f["file"].get<std::string>() << '\t' << f["triples"].get<std::size_t>() << " triples\n";
    }
    std::cout << "total\t" << total << " triples\n";
  }
  return kExitOk;
}

/// Replaces `<root>` with the root IRI of `file`, or with a variable bound
/// to every document root.
std::string substitute_root(Session& session, std::string text, const std::optional<std::string>& file) {
  const std::string marker = "<root>";
  if (text.find(marker) == std::string::npos) return text;
  std::string replacement;
  if (file) {
    replacement = "<" + session.indexer().get_index(session.file_arg(*file)) + ">";
  } else {
    replacement = "?root";
    const std::string constraint = "\n?root rdf:type IDE:Document\n";
    const std::size_t close = text.find_last_not_of(" \t\r\n");
    if (close != std::string::npos && text[close] == '}') text.insert(close, constraint);
    else text += constraint;
  }
  for (std::size_t pos = 0; (pos = text.find(marker, pos)) != std::string::npos; pos += replacement.size()) {
    text.replace(pos, marker.size(), replacement);
  }
  return text;
}

int run_query(const Options& options, const std::optional<std::string>& inline_query,
              const std::optional<std::string>& query_file, const std::optional<std::string>& file) {
  std::string text;
  if (inline_query) {
    text = *inline_query;
  } else if (query_file) {
    std::ifstream in(*query_file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + *query_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  } else {
    throw CLI::ValidationError("query", "give a pattern file or -q");
  }
  Session session(find_root(options, file ? std::vector<std::string>{*file} : std::vector<std::string>{}));
  session.indexer().refresh_all();
  // A SELECT clause must stay in front, so the root constraint is appended.
  text = substitute_root(session, std::move(text), file);
  auto result = session.indexer().query(text);
  print_json(to_json(result));
  return kExitOk;
}

int run_export(const Options& options, const std::string& output) {
  Session session(find_root(options, {}));
  session.indexer().refresh_all();
  const Store& store = session.indexer().store();
  std::vector<Triple> triples;
  for (const auto& [file, entry] : store.files()) {
    auto of = store.triples_of(file);
    triples.insert(triples.end(), of.begin(), of.end());
  }
  const std::string text = write_ntriples(triples);
  if (output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + output);
  }
  if (options.json && output != "-") print_json({{"file", output}, {"triples", triples.size()}});
  return kExitOk;
}

int run_search(const Options& options, const std::vector<std::string>& keywords) {
  Session session(find_root(options, {}));
  auto hits = search_definitions(session.indexer(), keywords);
  if (options.json) {
    print_json(to_json(hits));
  } else {
    for (const auto& hit : hits) {
      auto [line, column] = line_column(session.workspace().content(hit.file), hit.span.start);
      std::cout << hit.file << ':' << line << ':' << column << '\t' << hit.score << '\t' << hit.definiendum;
      if (hit.title) std::cout << " (" << *hit.title << ')';
      std::cout << '\t' << hit.snippet << '\n';
    }
  }
  return kExitOk;
}

struct BuildArgs {
  std::string file;
  std::string target = "pdf";
  std::string out_dir;
  bool dry_run = false;
  bool keep_temps = false;
  bool watch = false;
  int debounce_ms = 500;
  int max_builds = 0;
};

int build_once(const Options& options, Session& session, const BuildConfig& config, const BuildArgs& args) {
  const std::string file = session.file_arg(args.file);
  auto doc = session.indexer().document(file);
  Workflow workflow = select_workflow(args.target, *doc, config);
  const fs::path source = fs::absolute(session.workspace().absolute(file)).lexically_normal();
  const fs::path output_dir = args.out_dir.empty() ? source.parent_path() : fs::absolute(args.out_dir);
  if (args.dry_run) {
    ExecutionPlan p = plan(workflow, source, config, fs::temp_directory_path() / "flexitex-build-XXXX", output_dir);
    if (options.json) {
      print_json(to_json(p));
    } else {
      for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& step = p.steps[i];
        std::cout << (i + 1) << ". " << step.id << ':';
        for (const auto& arg : step.argv) std::cout << ' ' << arg;
        std::cout << '\n';
        if (i < p.bindings.size()) {
          const auto& b = p.bindings[i];
          std::cout << "   -> " << to_string(b.kind);
          if (!b.path.empty()) std::cout << ' ' << b.path;
          std::cout << '\n';
        }
      }
      std::cout << "artifact: " << p.artifact_destination.generic_string() << '\n';
    }
    return kExitOk;
  }
  ExecutionPlan p = plan(workflow, source, config, make_scratch_dir(), output_dir);
  ExecuteOptions exec;
  exec.keep_temps = args.keep_temps;
  exec.diagnostic_file = file;
  BuildResult result = execute(p, config, exec);
  if (options.json) {
    json out = to_json(result);
    if (args.keep_temps) out["workdir"] = p.workdir.generic_string();
    print_json(out);
  } else {
    for (const auto& step : result.steps) std::cout << step.id << ": exit " << step.exit_status << '\n';
    for (const auto& a : result.artifacts) std::cout << "artifact: " << a.generic_string() << '\n';
    if (args.keep_temps) std::cout << "workdir: " << p.workdir.generic_string() << '\n';
  }
  print_diagnostics(session, result.diagnostics);
  return result.success ? exit_for(result.diagnostics) : kExitErrors;
}

int run_build(const Options& options, const BuildArgs& args) {
  Session session(find_root(options, {args.file}));
  BuildConfig config = parse_build_config(session.workspace().config());
  int status = build_once(options, session, config, args);
  if (!args.watch || args.dry_run) return status;

  Debouncer debouncer{std::chrono::milliseconds(args.debounce_ms)};
  auto snapshot = [&] {
    Workspace fresh(session.workspace().root());
    std::map<std::string, std::uint64_t> digests;
    for (const auto& f : fresh.files()) digests[f] = fresh.digest(f);
    return digests;
  };
  auto last = snapshot();
  int builds = 1;
  while (args.max_builds <= 0 || builds < args.max_builds) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    auto now = snapshot();
    if (now != last) {
      last = std::move(now);
      debouncer.touch(Debouncer::clock::now());
    }
    if (debouncer.fire(Debouncer::clock::now())) {
      session.workspace().rescan();
      status = build_once(options, session, config, args);
      ++builds;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language services for modular sTeX documents", "flexitex"};
  app.require_subcommand(1);
  app.fallthrough();
  Options options;
  app.add_option("--root", options.root, "Workspace root directory");
  app.add_flag("--json", options.json, "Machine-readable output on stdout");

  std::string file;
  std::vector<std::string> paths;

  auto* parse_cmd = app.add_subcommand("parse", "Print the syntax tree of a file");
  parse_cmd->add_option("file", file, "Source file")->required();

  bool ansi = false;
  auto* highlight_cmd = app.add_subcommand("highlight", "Semantic highlighting of a file");
  highlight_cmd->add_option("file", file, "Source file")->required();
  highlight_cmd->add_flag("--ansi", ansi, "Render colorized source");

  auto* lint_cmd = app.add_subcommand("lint", "Report diagnostics");
  lint_cmd->add_option("paths", paths, "Files or directories (default: whole workspace)");

  std::size_t offset = 0;
  std::optional<std::string> prefix;
  auto* complete_cmd = app.add_subcommand("complete", "Completion candidates at a byte offset");
  complete_cmd->add_option("file", file, "Source file")->required();
  complete_cmd->add_option("--offset", offset, "Byte offset")->required();
  complete_cmd->add_option("--prefix", prefix, "Override the typed prefix");

  auto* index_cmd = app.add_subcommand("index", "Index files and report triple counts");
  index_cmd->add_option("paths", paths, "Files or directories (default: whole workspace)");

  std::optional<std::string> inline_query;
  std::optional<std::string> query_file;
  std::optional<std::string> query_scope;
  auto* query_cmd = app.add_subcommand("query", "Run a conjunctive triple-pattern query");
  query_cmd->add_option("pattern-file", query_file, "File holding the query");
  query_cmd->add_option("-q,--query", inline_query, "Query text, patterns separated by ';'");
  query_cmd->add_option("--file", query_scope, "Bind <root> to this file's root node");

  std::string ntriples_out;
  auto* export_cmd = app.add_subcommand("export", "Export the index");
  export_cmd->add_option("--ntriples", ntriples_out, "Output file, '-' for stdout")->required();

  std::vector<std::string> keywords;
  auto* search_cmd = app.add_subcommand("search", "Find definitions containing every keyword");
  search_cmd->add_option("keywords", keywords, "Keywords")->required();

  BuildArgs build_args;
  auto* build_cmd = app.add_subcommand("build", "Compile a document");
  build_cmd->add_option("file", build_args.file, "Source file")->required();
  build_cmd->add_option("--target", build_args.target, "pdf, xhtml, omdoc or a configured workflow");
  build_cmd->add_option("--out-dir", build_args.out_dir, "Artifact directory (default: next to the source)");
  build_cmd->add_flag("--dry-run", build_args.dry_run, "Print the execution plan only");
  build_cmd->add_flag("--keep-temps", build_args.keep_temps, "Keep the scratch directory");
  build_cmd->add_flag("--watch", build_args.watch, "Rebuild after workspace changes");
  build_cmd->add_option("--debounce", build_args.debounce_ms, "Quiet period before a rebuild, in ms");
  build_cmd->add_option("--max-builds", build_args.max_builds, "Stop watching after this many builds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "flexitex: " << e.what() << "\n\n" << app.help();
    return kExitFailure;
  }

  try {
    if (*parse_cmd) return run_parse(options, file);
    if (*highlight_cmd) return run_highlight(options, file, ansi);
    if (*lint_cmd) return run_lint(options, paths);
    if (*complete_cmd) return run_complete(options, file, offset, prefix);
    if (*index_cmd) return run_index(options, paths);
    if (*query_cmd) return run_query(options, inline_query, query_file, query_scope);
    if (*export_cmd) return run_export(options, ntriples_out);
    if (*search_cmd) return run_search(options, keywords);
    if (*build_cmd) return run_build(options, build_args);
  } catch (const CLI::ParseError& e) {
    std::cerr << "flexitex: " << e.what() << "\n\n" << app.help();
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "flexitex: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
