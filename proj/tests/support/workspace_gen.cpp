#include "support/workspace_gen.hpp"

#include <array>
#include <fstream>
#include <vector>

namespace flexitex::testing {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, std::size_t one_in) { return uniform(rng, 1, one_in) == 1; }

constexpr std::array<std::string_view, 16> kWords{
    "set",     "Function", "relation", "product", "pair",  "element", "ordered", "map",
    "Natural", "number",   "group",    "ring",    "field", "vector",  "space",   "order"};

std::string dir_of(const std::string& file) {
  auto slash = file.rfind('/');
  return slash == std::string::npos ? std::string() : file.substr(0, slash + 1);
}

/// Path of `target` as written in an import from `from`.
std::string relative_import(Rng& rng, const std::string& from, const std::string& target) {
  std::string from_dir = dir_of(from);
  std::string path = target.substr(0, target.size() - 4);  // drop ".tex"
  std::string written;
  if (from_dir.empty()) written = path;
  else if (path.compare(0, from_dir.size(), from_dir) == 0) written = path.substr(from_dir.size());
  else written = "../" + path;
  if (chance(rng, 5)) written += ".tex";
  return written;
}

std::string text_line(Rng& rng) {
  std::string out;
  std::size_t n = uniform(rng, 1, 6);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kWords[uniform(rng, 0, kWords.size() - 1)];
  }
  return out;
}

struct FilePlan {
  std::string path;
  std::vector<std::string> modules;  ///< ids; empty string = anonymous
};

}  // namespace

FileMap random_workspace(Rng& rng, const WorkspaceShape& shape) {
  const std::size_t file_count = uniform(rng, 1, shape.max_files);
  std::vector<FilePlan> plans(file_count);
  for (std::size_t f = 0; f < file_count; ++f) {
    plans[f].path = (chance(rng, 3) ? "sub/f" : "f") + std::to_string(f) + ".tex";
    std::size_t modules = uniform(rng, 0, shape.max_modules);
    for (std::size_t m = 0; m < modules; ++m) {
      // Ids repeat across files now and then; anonymous modules are rare.
      std::string id = chance(rng, 8) ? "shared" + std::to_string(m) : "m" + std::to_string(f) + "x" + std::to_string(m);
      if (chance(rng, 12)) id.clear();
      plans[f].modules.push_back(id);
    }
  }

  auto symbol_name = [&] { return "s" + std::string(1, static_cast<char>('a' + uniform(rng, 0, 11))); };

  auto item = [&](const FilePlan& self, std::vector<std::string>& symbols) {
    std::string out;
    switch (uniform(rng, 0, 4)) {
      case 0:
      case 1: {
        // Import: mostly real targets, sometimes ghosts or unknown ids.
        const FilePlan& target = plans[uniform(rng, 0, plans.size() - 1)];
        std::string path = chance(rng, 10) ? "ghost" + std::to_string(uniform(rng, 0, 3))
                                           : relative_import(rng, self.path, target.path);
        std::string id;
        std::vector<std::string> named;
        for (const auto& m : target.modules) {
          if (!m.empty()) named.push_back(m);
        }
        if (named.empty() || chance(rng, 8)) id = "nomod" + std::to_string(uniform(rng, 0, 2));
        else id = named[uniform(rng, 0, named.size() - 1)];
        out = "\\importmodule[" + path + "]{" + id + "}";
        break;
      }
      case 2: {
        std::string name = symbol_name();
        symbols.push_back(name);
        out = "\\symdef{" + name + "}";
        if (chance(rng, 3)) out += "[" + std::to_string(uniform(rng, 1, 3)) + "]";
        out += "{\\mathrm{" + name + "}}";
        break;
      }
      case 3: {
        std::string names;
        std::size_t count = uniform(rng, 1, 2);
        for (std::size_t i = 0; i < count; ++i) {
          if (i) names += ",";
          names += !symbols.empty() && chance(rng, 2) ? symbols[uniform(rng, 0, symbols.size() - 1)] : symbol_name();
        }
        std::string opts = "id=d" + std::to_string(uniform(rng, 0, 99));
        if (chance(rng, 2)) opts += ",title=" + text_line(rng);
        if (!chance(rng, 10)) opts += count > 1 ? ",for={" + names + "}" : ",for=" + names;
        out = "\\begin{definition}[" + opts + "]\n    " + text_line(rng);
        if (chance(rng, 2)) out += " {\\defin{" + text_line(rng) + "}}";
        if (!symbols.empty() && chance(rng, 2)) out += " $\\" + symbols[uniform(rng, 0, symbols.size() - 1)] + "$";
        out += " " + text_line(rng) + "\n  \\end{definition}";
        break;
      }
      default:
        out = text_line(rng);
        if (!symbols.empty() && chance(rng, 2)) out += " $\\" + symbols[uniform(rng, 0, symbols.size() - 1)] + "{x}$";
        break;
    }
    return out;
  };

  FileMap files;
  for (const FilePlan& plan : plans) {
    std::string text;
    std::vector<std::string> doc_symbols;
    if (chance(rng, 3)) text += item(plan, doc_symbols) + "\n";
    for (const auto& id : plan.modules) {
      std::vector<std::string> symbols;
      text += id.empty() ? "\\begin{module}\n" : "\\begin{module}[id=" + id + "]\n";
      std::size_t items = uniform(rng, 0, shape.max_items);
      for (std::size_t i = 0; i < items; ++i) text += "  " + item(plan, symbols) + "\n";
      text += "\\end{module}\n";
      if (chance(rng, 4)) text += text_line(rng) + "\n";
    }
    if (chance(rng, 4)) text += item(plan, doc_symbols) + "\n";
    files[plan.path] = std::move(text);
  }
  return files;
}

void write_files(const FileMap& files, const std::filesystem::path& root) {
  for (const auto& [path, content] : files) {
    auto full = root / path;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    out << content;
  }
}

FileMap chain_workspace(std::size_t count) {
  FileMap files;
  for (std::size_t i = 0; i < count; ++i) {
    std::string id = "mod" + std::to_string(i);
    std::string text = "\\begin{module}[id=" + id + "]\n";
    if (i > 0) text += "  \\importmodule[file" + std::to_string(i - 1) + "]{mod" + std::to_string(i - 1) + "}\n";
    if (i > 1) text += "  \\importmodule[file" + std::to_string(i / 2) + "]{mod" + std::to_string(i / 2) + "}\n";
    for (int s = 0; s < 3; ++s) {
      std::string name = "sym" + std::to_string(i) + "n" + std::to_string(s);
      text += "  \\symdef{" + name + "}[1]{" + name + "(#1)}\n";
    }
    text += "  \\begin{definition}[id=def" + std::to_string(i) + ",for=sym" + std::to_string(i) +
            "n0]\n    The symbol number " + std::to_string(i) + " is defined here.\n  \\end{definition}\n";
    text += "\\end{module}\n";
    files["file" + std::to_string(i) + ".tex"] = std::move(text);
  }
  return files;
}

}  // namespace flexitex::testing
