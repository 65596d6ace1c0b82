#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flexitex {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProcessResult {
  int exit_status = 0;  ///< exit code, or 128 + signal number
  std::string out;
  std::string err;
};

/// Runs argv[0] (looked up on PATH) in `cwd`, feeding `input` to its stdin
/// and capturing stdout and stderr. Throws ProcessError when the program
/// cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          const std::filesystem::path& cwd,
                          const std::vector<std::pair<std::string, std::string>>& environment = {});

}  // namespace flexitex
