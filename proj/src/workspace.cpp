#include "flexitex/workspace.hpp"

#include "flexitex/syntax.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace flexitex {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return buffer.str();
}

}  // namespace

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) {
    throw WorkspaceError("workspace root is not a directory: " + root_.string());
  }
  root_ = fs::canonical(root_);

  if (const char* env = std::getenv("FLEXITEX_CONFIG"); env && *env) {
    config_path_ = fs::path(env);
  } else if (fs::exists(root_ / "flexitex.json")) {
    config_path_ = root_ / "flexitex.json";
  }
  if (config_path_) {
    auto text = read_text(*config_path_);
    if (!text) throw WorkspaceError("cannot read configuration " + config_path_->string());
    try {
      config_ = nlohmann::json::parse(*text);
    } catch (const nlohmann::json::exception& e) {
      throw WorkspaceError("invalid configuration " + config_path_->string() + ": " + e.what());
    }
    if (!config_.is_object()) throw WorkspaceError("configuration must be a JSON object");
  }
  if (auto it = config_.find("files"); it != config_.end()) {
    globs_.clear();
    if (it->is_string()) {
      globs_.push_back(it->get<std::string>());
    } else if (it->is_array()) {
      for (const auto& g : *it) {
        if (!g.is_string()) throw WorkspaceError("\"files\" must be a string or list of strings");
        globs_.push_back(g.get<std::string>());
      }
    } else {
      throw WorkspaceError("\"files\" must be a string or list of strings");
    }
  }
  rescan();
}

bool Workspace::matches_glob(const std::string& file) const {
  std::string name = fs::path(file).filename().string();
  for (const auto& glob : globs_) {
    // Globs containing '/' match the whole relative path.
    const std::string& subject = glob.find('/') == std::string::npos ? name : file;
    if (fnmatch(glob.c_str(), subject.c_str(), 0) == 0) return true;
  }
  return false;
}

void Workspace::rescan() {
  entries_.clear();
  listed_.clear();
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file(ec)) continue;
    std::string rel = fs::relative(it->path(), root_, ec).generic_string();
    if (matches_glob(rel)) listed_.push_back(rel);
  }
  std::sort(listed_.begin(), listed_.end());
}

std::vector<std::string> Workspace::files() const {
  std::vector<std::string> out = listed_;
  for (const auto& [file, entry] : entries_) {
    if (matches_glob(file) && !std::binary_search(listed_.begin(), listed_.end(), file)) {
      out.push_back(file);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Workspace::exists(const std::string& file) const {
  if (entries_.count(file)) return true;
  std::error_code ec;
  return fs::is_regular_file(absolute(file), ec);
}

const Workspace::Entry& Workspace::entry(const std::string& file) const {
  if (auto it = entries_.find(file); it != entries_.end()) return it->second;
  auto text = read_text(absolute(file));
  std::error_code ec;
  if (!text || !fs::is_regular_file(absolute(file), ec)) {
    throw WorkspaceError("cannot read " + file);
  }
  Entry e{std::move(*text), 0};
  e.digest = content_digest(e.text);
  return entries_.emplace(file, std::move(e)).first->second;
}

const std::string& Workspace::content(const std::string& file) const { return entry(file).text; }

std::uint64_t Workspace::digest(const std::string& file) const { return entry(file).digest; }

void Workspace::set_content(const std::string& file, std::string text) {
  Entry e{std::move(text), 0};
  e.digest = content_digest(e.text);
  entries_[file] = std::move(e);
}

std::string resolve_import_path(const std::string& from_file, std::string_view raw) {
  fs::path target = fs::path(from_file).parent_path() / fs::path(std::string(trim(raw)));
  if (target.extension() != ".tex") target += ".tex";
  return target.lexically_normal().generic_string();
}

fs::path Workspace::absolute(const std::string& file) const { return root_ / fs::path(file); }

std::string Workspace::relative(const fs::path& path) const {
  fs::path abs = path.is_absolute() ? path : fs::absolute(path);
  std::error_code ec;
  fs::path canon = fs::weakly_canonical(abs, ec);
  if (ec) canon = abs.lexically_normal();
  return canon.lexically_relative(root_).generic_string();
}

}  // namespace flexitex
