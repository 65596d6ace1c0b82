#include "flexitex/build.hpp"

#include "flexitex/process.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

namespace flexitex {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Placeholders {
  std::string_view in, out, jobname, source, sourcedir, workdir;

  /// Single pass, so substituted values are never expanded again.
  std::string expand(const std::string& text) const {
    if (text.find('{') == std::string::npos) return text;
    const std::pair<std::string_view, const std::string_view*> names[] = {
        {"{in}", &in},          {"{out}", &out},           {"{jobname}", &jobname},
        {"{sourcedir}", &sourcedir}, {"{source}", &source}, {"{workdir}", &workdir}};
    std::string result;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t brace = text.find('{', pos);
      if (brace == std::string::npos) break;
      result.append(text, pos, brace - pos);
      pos = brace + 1;
      const std::string_view* value = nullptr;
      for (const auto& [name, v] : names) {
        if (text.compare(brace, name.size(), name) == 0) {
          value = v;
          pos = brace + name.size();
          break;
        }
      }
      if (value) result += *value;
      else result += '{';
    }
    if (pos < text.size()) result.append(text, pos, std::string::npos);
    return result;
  }
};

std::string output_name(const ProgramHandler& program) {
  return program.output_file.empty() ? "{jobname}." + program.id + ".out" : program.output_file;
}

Severity parse_severity(const std::string& text) {
  if (text == "error") return Severity::error;
  if (text == "warning") return Severity::warning;
  if (text == "info") return Severity::info;
  throw BuildError("unknown severity '" + text + "'");
}

std::vector<std::string> string_list(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty()) throw BuildError(what + " must be a non-empty array of strings");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) throw BuildError(what + " must be a non-empty array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

ProgramHandler parse_program(const json& value) {
  if (!value.is_object()) throw BuildError("each program must be an object");
  if (!value.contains("id") || !value["id"].is_string()) throw BuildError("program without a string \"id\"");
  ProgramHandler program;
  program.id = value["id"].get<std::string>();
  const std::string where = "program '" + program.id + "': ";
  if (!value.contains("command")) throw BuildError(where + "missing \"command\"");
  program.command = string_list(value["command"], where + "\"command\"");
  if (!value.contains("input")) throw BuildError(where + "missing \"input\"");
  for (const auto& cap : string_list(value["input"], where + "\"input\"")) {
    if (cap == "stdin") program.caps.in_stdin = true;
    else if (cap == "file") program.caps.in_file = true;
    else throw BuildError(where + "unknown input capability '" + cap + "'");
  }
  if (!value.contains("output")) throw BuildError(where + "missing \"output\"");
  for (const auto& cap : string_list(value["output"], where + "\"output\"")) {
    if (cap == "stdout") program.caps.out_stdout = true;
    else if (cap == "file") program.caps.out_file = true;
    else if (cap == "multi-file") program.caps.out_multi_file = true;
    else throw BuildError(where + "unknown output capability '" + cap + "'");
  }
  if (value.contains("output_file")) {
    if (!value["output_file"].is_string()) throw BuildError(where + "\"output_file\" must be a string");
    program.output_file = value["output_file"].get<std::string>();
  }
  if (value.contains("parser")) {
    if (!value["parser"].is_array()) throw BuildError(where + "\"parser\" must be an array");
    for (const auto& rule_json : value["parser"]) {
      if (!rule_json.is_object() || !rule_json.contains("pattern") || !rule_json["pattern"].is_string()) {
        throw BuildError(where + "parser rule without a string \"pattern\"");
      }
      OutputRule rule;
      rule.pattern = rule_json["pattern"].get<std::string>();
      try {
        std::regex compiled(rule.pattern);
        if (rule_json.contains("severity")) rule.severity = parse_severity(rule_json["severity"].get<std::string>());
        if (rule_json.contains("message")) rule.message_group = rule_json["message"].get<int>();
        if (rule_json.contains("line")) rule.line_group = rule_json["line"].get<int>();
        const auto groups = static_cast<int>(compiled.mark_count());
        if (rule.message_group < 0 || rule.message_group > groups || rule.line_group < 0 ||
            rule.line_group > groups) {
          throw BuildError(where + "parser rule refers to a missing capture group");
        }
      } catch (const std::regex_error& e) {
        throw BuildError(where + "invalid pattern '" + rule.pattern + "': " + e.what());
      } catch (const json::exception& e) {
        throw BuildError(where + "malformed parser rule: " + e.what());
      }
      program.parser.push_back(std::move(rule));
    }
  }
  return program;
}

std::vector<SourceSpan> line_spans(std::string_view text) {
  std::vector<SourceSpan> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      lines.push_back({start, i});
      start = i + 1;
    }
  }
  return lines;
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BuildError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_all(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw BuildError("cannot write " + path.string());
}

}  // namespace

std::vector<SourceLineDiagnostic> ProgramHandler::parse_output(std::string_view output) const {
  std::vector<SourceLineDiagnostic> found;
  if (parser.empty()) return found;
  std::vector<std::regex> compiled;
  for (const auto& rule : parser) compiled.emplace_back(rule.pattern);
  std::size_t start = 0;
  while (start <= output.size()) {
    std::size_t end = output.find('\n', start);
    if (end == std::string_view::npos) end = output.size();
    std::string line(output.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (std::size_t r = 0; r < parser.size(); ++r) {
      std::smatch match;
      if (!std::regex_search(line, match, compiled[r])) continue;
      SourceLineDiagnostic d;
      d.severity = parser[r].severity;
      d.message = match[static_cast<std::size_t>(parser[r].message_group)].str();
      if (parser[r].line_group > 0) {
        const std::string digits = match[static_cast<std::size_t>(parser[r].line_group)].str();
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
          d.line = std::stoull(digits);
        }
      }
      found.push_back(std::move(d));
    }
    if (end == output.size()) break;
    start = end + 1;
  }
  return found;
}

BuildConfig default_build_config() {
  const json defaults = json::parse(R"json({
    "programs": [
      {"id": "pdflatex",
       "command": ["pdflatex", "-interaction=nonstopmode", "-file-line-error", "-jobname={jobname}", "{source}"],
       "input": ["file"], "output": ["multi-file"], "output_file": "{jobname}.pdf",
       "parser": [
         {"pattern": "^[^:]+:([0-9]+): (.*)$", "severity": "error", "message": 2, "line": 1},
         {"pattern": "^LaTeX Warning: (.*) on input line ([0-9]+)\\.$", "severity": "warning", "message": 1, "line": 2}
       ]},
      {"id": "bibtex",
       "command": ["bibtex", "{jobname}"],
       "input": ["file"], "output": ["file"], "output_file": "{jobname}.bbl",
       "parser": [
         {"pattern": "^Warning--(.*)$", "severity": "warning", "message": 1},
         {"pattern": "^I couldn't open (.*)$", "severity": "error", "message": 0}
       ]},
      {"id": "latexml",
       "command": ["latexml", "--quiet", "{in}"],
       "input": ["file"], "output": ["stdout", "file"], "output_file": "{jobname}.xml",
       "parser": [
         {"pattern": "^Error:(.*) at .*; line ([0-9]+)", "severity": "error", "message": 1, "line": 2},
         {"pattern": "^Warning:(.*) at .*; line ([0-9]+)", "severity": "warning", "message": 1, "line": 2}
       ]},
      {"id": "latexmlpost",
       "command": ["latexmlpost", "--format=xhtml", "--destination={out}", "{in}"],
       "input": ["file"], "output": ["file", "multi-file"], "output_file": "{jobname}.xhtml",
       "parser": [
         {"pattern": "^Error:(.*)$", "severity": "error", "message": 1},
         {"pattern": "^Warning:(.*)$", "severity": "warning", "message": 1}
       ]},
      {"id": "xslt",
       "command": ["xsltproc", "{sourcedir}/omdoc.xsl", "{in}"],
       "input": ["file"], "output": ["stdout"], "output_file": "{jobname}.omdoc",
       "parser": [
         {"pattern": "^(.*error.*)$", "severity": "error", "message": 1}
       ]}
    ],
    "workflows": {
      "pdf": ["pdflatex"],
      "pdf+bibtex": ["pdflatex", "bibtex", "pdflatex"],
      "xhtml": ["latexml", "latexmlpost"],
      "omdoc": ["latexml", "latexmlpost", "xslt"]
    }
  })json");
  return parse_build_config(defaults, BuildConfig{});
}

BuildConfig parse_build_config(const json& value, BuildConfig base) {
  if (!value.is_object()) throw BuildError("build configuration must be a JSON object");
  if (value.contains("programs")) {
    if (!value["programs"].is_array()) throw BuildError("\"programs\" must be an array");
    for (const auto& item : value["programs"]) {
      ProgramHandler program = parse_program(item);
      std::string id = program.id;
      base.programs.insert_or_assign(std::move(id), std::move(program));
    }
  }
  if (value.contains("workflows")) {
    if (!value["workflows"].is_object()) throw BuildError("\"workflows\" must be an object");
    for (const auto& [target, steps] : value["workflows"].items()) {
      base.workflows.insert_or_assign(target, string_list(steps, "workflow '" + target + "'"));
    }
  }
  for (const auto& [target, steps] : base.workflows) {
    for (const auto& id : steps) {
      if (!base.programs.count(id)) {
        throw BuildError("workflow '" + target + "' uses unknown program '" + id + "'");
      }
    }
  }
  return base;
}

json to_json(const ProgramHandler& program) {
  json input = json::array();
  if (program.caps.in_stdin) input.push_back("stdin");
  if (program.caps.in_file) input.push_back("file");
  json output = json::array();
  if (program.caps.out_stdout) output.push_back("stdout");
  if (program.caps.out_file) output.push_back("file");
  if (program.caps.out_multi_file) output.push_back("multi-file");
  json parser = json::array();
  for (const auto& rule : program.parser) {
    parser.push_back({{"pattern", rule.pattern},
                      {"severity", std::string(to_string(rule.severity))},
                      {"message", rule.message_group},
                      {"line", rule.line_group}});
  }
  return {{"id", program.id},         {"command", program.command}, {"input", input},
          {"output", output},         {"output_file", program.output_file}, {"parser", parser}};
}

std::string_view to_string(BindingKind kind) {
  switch (kind) {
    case BindingKind::pipe:
      return "pipe";
    case BindingKind::temp_file:
      return "temp-file";
    case BindingKind::workdir:
      return "workdir";
  }
  return "pipe";
}

std::optional<BindingKind> choose_binding(const Capabilities& producer, const Capabilities& consumer) {
  if (producer.out_stdout && consumer.in_stdin) return BindingKind::pipe;
  if (!consumer.in_file) return std::nullopt;
  if (producer.out_multi_file) return BindingKind::workdir;
  if (producer.out_stdout || producer.out_file) return BindingKind::temp_file;
  return std::nullopt;
}

ExecutionPlan plan(const Workflow& workflow, const fs::path& source, const BuildConfig& config,
                   const fs::path& workdir, const fs::path& output_dir) {
  if (workflow.steps.empty()) throw BuildError("workflow '" + workflow.target + "' has no steps");
  std::vector<const ProgramHandler*> programs;
  for (const auto& id : workflow.steps) {
    auto it = config.programs.find(id);
    if (it == config.programs.end()) throw BuildError("unknown program '" + id + "'");
    programs.push_back(&it->second);
  }

  for (std::size_t i = 0; i + 1 < programs.size(); ++i) {
    if (!choose_binding(programs[i]->caps, programs[i + 1]->caps)) {
      throw BuildError("no binding from step " + std::to_string(i + 1) + " '" + programs[i]->id + "' to step " +
                       std::to_string(i + 2) + " '" + programs[i + 1]->id +
                       "': the consumer reads only stdin and the producer does not write stdout");
    }
  }

  ExecutionPlan result;
  result.target = workflow.target;
  result.source = source;
  result.workdir = workdir;
  result.output_dir = output_dir;
  const std::size_t n = programs.size();
  result.steps.resize(n);

  const std::string jobname = source.stem().string();
  const std::string source_text = source.generic_string();
  const std::string sourcedir = source.parent_path().generic_string();
  const std::string workdir_text = workdir.generic_string();
  Placeholders base;
  base.jobname = jobname;
  base.source = source_text;
  base.sourcedir = sourcedir;
  base.workdir = workdir_text;
  auto in_workdir = [&](const std::string& name) {
    std::string expanded = base.expand(name);
    if (!expanded.empty() && expanded.front() == '/') return expanded;
    return workdir_text + (workdir_text.empty() || workdir_text.back() == '/' ? "" : "/") + expanded;
  };

  for (std::size_t i = 0; i < n; ++i) {
    result.steps[i].id = programs[i]->id;
    result.steps[i].output_path = in_workdir(output_name(*programs[i]));
  }

  if (programs[0]->caps.in_file) {
    result.steps[0].input_path = source_text;
  } else {
    result.steps[0].stdin_from_source = true;
    result.source_via_stdin = true;
  }

  result.bindings.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto kind = choose_binding(programs[i]->caps, programs[i + 1]->caps);
    StepBinding binding;
    binding.kind = *kind;
    switch (*kind) {
      case BindingKind::pipe:
        result.steps[i].stdout_captured = true;
        result.steps[i + 1].stdin_from_pipe = true;
        break;
      case BindingKind::workdir:
        binding.path = result.steps[i].output_path;
        result.steps[i + 1].input_path = binding.path;
        break;
      case BindingKind::temp_file:
        binding.path = in_workdir(".flexitex-step" + std::to_string(i + 1) + "-" + programs[i]->id + ".tmp");
        binding.via_stdout = programs[i]->caps.out_stdout;
        if (binding.via_stdout) result.steps[i].stdout_captured = true;
        result.steps[i].output_path = binding.path;
        result.steps[i + 1].input_path = binding.path;
        break;
    }
    result.bindings.push_back(std::move(binding));
  }

  StepPlan& last = result.steps.back();
  result.artifact = last.output_path;
  if (programs.back()->caps.out_stdout) {
    result.artifact_from_stdout = true;
    last.stdout_captured = true;
  }
  result.artifact_destination = output_dir / result.artifact.substr(result.artifact.rfind('/') + 1);

  for (std::size_t i = 0; i < n; ++i) {
    Placeholders p = base;
    p.in = result.steps[i].input_path;
    p.out = result.steps[i].output_path;
    result.steps[i].argv.reserve(programs[i]->command.size());
    for (const auto& arg : programs[i]->command) result.steps[i].argv.push_back(p.expand(arg));
  }
  return result;
}

json to_json(const ExecutionPlan& plan) {
  json steps = json::array();
  for (const auto& step : plan.steps) {
    std::string input = step.stdin_from_source ? "source-stdin" : step.stdin_from_pipe ? "pipe" : "file";
    steps.push_back({{"id", step.id},
                     {"argv", step.argv},
                     {"input", input},
                     {"input_path", step.input_path},
                     {"output_path", step.output_path},
                     {"stdout_captured", step.stdout_captured}});
  }
  json bindings = json::array();
  for (std::size_t i = 0; i < plan.bindings.size(); ++i) {
    const auto& b = plan.bindings[i];
    json entry = {{"from", plan.steps[i].id}, {"to", plan.steps[i + 1].id}, {"kind", std::string(to_string(b.kind))}};
    if (!b.path.empty()) entry["path"] = b.path;
    if (b.kind == BindingKind::temp_file) entry["via"] = b.via_stdout ? "stdout" : "file";
    bindings.push_back(std::move(entry));
  }
  return {{"target", plan.target},
          {"source", plan.source.generic_string()},
          {"workdir", plan.workdir.generic_string()},
          {"steps", steps},
          {"bindings", bindings},
          {"artifact", plan.artifact},
          {"artifact_from_stdout", plan.artifact_from_stdout},
          {"destination", plan.artifact_destination.generic_string()}};
}

Workflow select_workflow(std::string_view target, const Document& doc, const BuildConfig& config) {
  std::string key(target);
  if (target == "pdf") {
    const bool bibliography = std::any_of(doc.nodes.begin(), doc.nodes.end(), [](const Node& n) {
      return n.kind == NodeKind::command && (n.name == "bibliography" || n.name == "addbibresource");
    });
    if (bibliography) key = "pdf+bibtex";
  }
  auto it = config.workflows.find(key);
  if (it == config.workflows.end()) throw BuildError("unknown build target '" + std::string(target) + "'");
  return Workflow{key, it->second};
}

fs::path make_scratch_dir() {
  std::random_device rd;
  std::mt19937_64 rng(rd());
  const fs::path base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::ostringstream name;
    name << "flexitex-build-" << std::hex << rng();
    fs::path dir = base / name.str();
    if (fs::create_directory(dir)) return dir;
  }
  throw BuildError("cannot create a scratch directory under " + base.string());
}

BuildResult execute(const ExecutionPlan& plan, const BuildConfig& config, const ExecuteOptions& options) {
  BuildResult result;
  std::error_code ec;
  fs::create_directories(plan.workdir, ec);
  if (ec) throw BuildError("cannot create " + plan.workdir.string() + ": " + ec.message());

  const std::string source_text = read_all(plan.source);
  const auto lines = line_spans(source_text);
  const std::string file = options.diagnostic_file.empty() ? plan.source.generic_string() : options.diagnostic_file;
  const std::string source_dir = plan.source.parent_path().string();
  const std::vector<std::pair<std::string, std::string>> environment{
      {"TEXINPUTS", source_dir + ":"}, {"BIBINPUTS", source_dir + ":"}};

  auto cleanup = [&] {
    if (options.keep_temps) return;
    std::error_code ignored;
    fs::remove_all(plan.workdir, ignored);
  };

  std::string carried;
  bool failed = false;
  try {
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      const StepPlan& step = plan.steps[i];
      const ProgramHandler& program = config.programs.at(step.id);
      std::string input;
      if (step.stdin_from_source) input = source_text;
      else if (step.stdin_from_pipe) input = std::move(carried);
      carried.clear();
      if (!step.input_path.empty() && !fs::exists(step.input_path)) {
        throw BuildError("step '" + step.id + "': input " + step.input_path + " was not produced");
      }

      ProcessResult run;
      try {
        run = run_process(step.argv, input, plan.workdir, environment);
      } catch (const ProcessError& e) {
        throw BuildError("step '" + step.id + "': " + e.what());
      }
      result.steps.push_back({step.id, step.argv, run.exit_status});

      std::string log = run.err;
      if (!step.stdout_captured) log = run.out + (run.out.empty() || run.out.back() == '\n' ? "" : "\n") + log;
      for (auto& found : program.parse_output(log)) {
        SourceSpan span{source_text.size(), source_text.size()};
        if (found.line && *found.line >= 1 && *found.line <= lines.size()) span = lines[*found.line - 1];
        else if (!found.line) span = {0, 0};
        result.diagnostics.push_back(
            {found.severity, std::string(codes::build_output), step.id + ": " + found.message, file, span});
      }

      if (run.exit_status != 0) {
        result.diagnostics.push_back({Severity::error, std::string(codes::build_failed),
                                      "step '" + step.id + "' exited with status " + std::to_string(run.exit_status),
                                      file, {0, 0}});
        failed = true;
        break;
      }

      if (i + 1 < plan.steps.size()) {
        const StepBinding& binding = plan.bindings[i];
        if (binding.kind == BindingKind::pipe) carried = std::move(run.out);
        else if (binding.kind == BindingKind::temp_file && binding.via_stdout) write_all(binding.path, run.out);
      } else if (plan.artifact_from_stdout) {
        write_all(plan.artifact, run.out);
      }
    }

    if (!failed) {
      if (!fs::exists(plan.artifact)) {
        result.diagnostics.push_back({Severity::error, std::string(codes::build_failed),
                                      "the build produced no " + fs::path(plan.artifact).filename().string(), file,
                                      {0, 0}});
        failed = true;
      } else {
        fs::create_directories(plan.output_dir, ec);
        fs::copy_file(plan.artifact, plan.artifact_destination, fs::copy_options::overwrite_existing, ec);
        if (ec) throw BuildError("cannot copy the artifact to " + plan.artifact_destination.string() + ": " + ec.message());
        result.artifacts.push_back(plan.artifact_destination);
      }
    }
  } catch (...) {
    cleanup();
    throw;
  }
  cleanup();
  result.success = !failed;
  sort_unique(result.diagnostics);
  return result;
}

bool Debouncer::fire(clock::time_point now) {
  if (!last_change_ || now - *last_change_ < interval_) return false;
  last_change_.reset();
  return true;
}

}  // namespace flexitex
