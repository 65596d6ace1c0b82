#pragma once

#include "flexitex/diagnostic.hpp"
#include "flexitex/syntax.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace flexitex {

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Capabilities {
  bool in_stdin = false;
  bool in_file = false;
  bool out_stdout = false;
  bool out_file = false;
  bool out_multi_file = false;

  bool operator==(const Capabilities&) const = default;
};

/// One output-parser rule. `message_group` and `line_group` are regex
/// capture indices; 0 for the message means the whole line, and a line group
/// of 0 means the diagnostic has no source line.
struct OutputRule {
  std::string pattern;
  Severity severity = Severity::warning;
  int message_group = 0;
  int line_group = 0;
};

struct SourceLineDiagnostic {
  Severity severity = Severity::warning;
  std::string message;
  std::optional<std::size_t> line;  ///< 1-based
};

struct ProgramHandler {
  std::string id;
  std::vector<std::string> command;  ///< executable + argument template
  Capabilities caps;
  std::string output_file;           ///< name template of the file output
  std::vector<OutputRule> parser;

  /// Runs every rule over every line of `output`.
  std::vector<SourceLineDiagnostic> parse_output(std::string_view output) const;
};

struct Workflow {
  std::string target;
  std::vector<std::string> steps;
};

struct BuildConfig {
  std::map<std::string, ProgramHandler> programs;
  std::map<std::string, std::vector<std::string>> workflows;
};

/// Built-in handlers for pdflatex, bibtex, latexml, latexmlpost and xslt and
/// the workflows pdf, pdf+bibtex, xhtml and omdoc.
BuildConfig default_build_config();

/// Reads `{programs: [...], workflows: {...}}` on top of `base`; programs
/// replace base entries with the same id. Throws BuildError on schema errors.
BuildConfig parse_build_config(const nlohmann::json& json, BuildConfig base = default_build_config());

nlohmann::json to_json(const ProgramHandler& program);

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

enum class BindingKind { pipe, temp_file, workdir };

std::string_view to_string(BindingKind kind);

/// Binding between adjacent steps, or nullopt when none is legal: pipe iff
/// the producer writes stdout and the consumer reads stdin; otherwise the
/// consumer must read a file, handed over through the working directory
/// when the producer writes several files and through a temp file otherwise.
std::optional<BindingKind> choose_binding(const Capabilities& producer, const Capabilities& consumer);

struct StepPlan {
  std::string id;
  std::vector<std::string> argv;  ///< placeholders expanded
  bool stdin_from_source = false;
  bool stdin_from_pipe = false;
  bool stdout_captured = false;   ///< stdout feeds a pipe, temp file or the artifact
  std::string input_path;         ///< {in}; empty when reading stdin
  std::string output_path;        ///< {out}
};

struct StepBinding {
  BindingKind kind = BindingKind::pipe;
  std::string path;              ///< temp file or handoff file; empty for pipes
  bool via_stdout = false;       ///< temp file written from the producer's stdout
};

struct ExecutionPlan {
  std::string target;
  std::filesystem::path source;
  std::filesystem::path workdir;        ///< scratch directory all steps run in
  std::filesystem::path output_dir;     ///< where artifacts are copied
  std::vector<StepPlan> steps;
  std::vector<StepBinding> bindings;    ///< bindings[i] joins steps i and i+1
  bool source_via_stdin = false;
  std::string artifact;                 ///< final artifact path inside workdir
  bool artifact_from_stdout = false;
  std::filesystem::path artifact_destination;
};

/// Plans `workflow` for `source`. The plan is a pure function of its
/// arguments; nothing touches the file system. Throws BuildError naming both
/// steps of an adjacent pair without a legal binding, or an unknown step id.
ExecutionPlan plan(const Workflow& workflow, const std::filesystem::path& source, const BuildConfig& config,
                   const std::filesystem::path& workdir, const std::filesystem::path& output_dir);

nlohmann::json to_json(const ExecutionPlan& plan);

/// pdf, xhtml or omdoc. A pdf build gets the bibtex workflow when the
/// document has a \bibliography or \addbibresource command.
Workflow select_workflow(std::string_view target, const Document& doc, const BuildConfig& config);

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct StepResult {
  std::string id;
  std::vector<std::string> argv;
  int exit_status = 0;
};

struct BuildResult {
  std::vector<StepResult> steps;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::filesystem::path> artifacts;
  bool success = false;
};

struct ExecuteOptions {
  bool keep_temps = false;
  std::string diagnostic_file;  ///< file name reported in diagnostics
};

/// Runs the steps in order inside plan.workdir (created if missing). Stops
/// at the first nonzero exit. Throws BuildError when a program cannot be
/// started or a binding file cannot be read or written.
BuildResult execute(const ExecutionPlan& plan, const BuildConfig& config, const ExecuteOptions& options = {});

/// Creates a fresh scratch directory under the system temp directory.
std::filesystem::path make_scratch_dir();

/// Fires once after `interval` of quiet following the last change.
class Debouncer {
 public:
  using clock = std::chrono::steady_clock;

  explicit Debouncer(std::chrono::milliseconds interval) : interval_(interval) {}

  void touch(clock::time_point now) { last_change_ = now; }
  bool pending() const { return last_change_.has_value(); }
  /// True (and resets) when a change is pending and `interval` has passed.
  bool fire(clock::time_point now);

 private:
  std::chrono::milliseconds interval_;
  std::optional<clock::time_point> last_change_;
};

}  // namespace flexitex
