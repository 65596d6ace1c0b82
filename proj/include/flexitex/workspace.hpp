#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexitex {

/// Import path written in `from_file` as a workspace-relative path: relative
/// to the file's directory, ".tex" appended when absent, lexically normalized.
std::string resolve_import_path(const std::string& from_file, std::string_view raw);

class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A directory of sources plus its configuration. Files are addressed by
/// workspace-relative paths with '/' separators. Contents are read once and
/// then served from memory; set_content() replaces them (editor buffers).
class Workspace {
 public:
  /// Scans `root` for files matching the configured glob (default "*.tex",
  /// matched against the file name) and loads flexitex.json, or the file
  /// named by FLEXITEX_CONFIG when set. Throws WorkspaceError if root is not
  /// a directory or the configuration is not valid JSON.
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const nlohmann::json& config() const { return config_; }
  const std::optional<std::filesystem::path>& config_path() const { return config_path_; }

  /// Source files of the workspace, sorted.
  std::vector<std::string> files() const;

  /// True if the file is loaded or exists on disk.
  bool exists(const std::string& file) const;

  /// Throws WorkspaceError when the file cannot be read.
  const std::string& content(const std::string& file) const;
  std::uint64_t digest(const std::string& file) const;

  /// Replaces a file's content in memory; the file joins files() if it
  /// matches the glob.
  void set_content(const std::string& file, std::string text);

  /// Re-reads the directory, dropping in-memory edits.
  void rescan();

  std::string resolve_import(const std::string& from_file, std::string_view raw) const {
    return resolve_import_path(from_file, raw);
  }

  std::filesystem::path absolute(const std::string& file) const;
  /// Workspace-relative form of a path (absolute, or relative to the cwd).
  std::string relative(const std::filesystem::path& path) const;

  bool matches_glob(const std::string& file) const;

 private:
  struct Entry {
    std::string text;
    std::uint64_t digest = 0;
  };
  const Entry& entry(const std::string& file) const;

  std::filesystem::path root_;
  nlohmann::json config_ = nlohmann::json::object();
  std::optional<std::filesystem::path> config_path_;
  std::vector<std::string> globs_{"*.tex"};
  std::vector<std::string> listed_;
  mutable std::map<std::string, Entry> entries_;
};

}  // namespace flexitex
