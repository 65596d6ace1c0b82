#include "flexitex/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace flexitex {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::error:
      return "error";
    case Severity::warning:
      return "warning";
    case Severity::info:
      return "info";
  }
  return "error";
}

namespace codes {

namespace {
constexpr auto kAll = [] {
  std::array<std::string_view, 15> all{
      unclosed_group,        unbalanced_brace,    unbalanced_bracket, env_mismatch,
      malformed_environment, missing_file,        unknown_module_id,  redundant_import,
      import_cycle,          missing_module_id,   symdef_outside_module,
      symdef_missing_name,   definition_missing_for, build_output,   build_failed};
  std::sort(all.begin(), all.end());
  return all;
}();
}  // namespace

std::span<const std::string_view> all() { return kAll; }

bool is_registered(std::string_view code) {
  return std::binary_search(kAll.begin(), kAll.end(), code);
}

}  // namespace codes

bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.file, a.span, a.severity, a.code, a.message) <
         std::tie(b.file, b.span, b.severity, b.code, b.message);
}

void sort_unique(std::vector<Diagnostic>& diagnostics) {
  std::sort(diagnostics.begin(), diagnostics.end(), diagnostic_less);
  diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

}  // namespace flexitex
