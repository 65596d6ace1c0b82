#pragma once

#include "flexitex/diagnostic.hpp"

#include <string>
#include <vector>

namespace flexitex {

class Indexer;

/// Parse and environment diagnostics of `file` plus every handler's
/// validation of its tagged nodes, sorted and deduplicated. Throws
/// WorkspaceError if the file cannot be read.
std::vector<Diagnostic> validate(Indexer& indexer, const std::string& file);

/// 1 if any diagnostic is an error, else 0.
int lint_exit_code(const std::vector<Diagnostic>& diagnostics);

}  // namespace flexitex
