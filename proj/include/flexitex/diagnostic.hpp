#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

/// Half-open byte range [start, end) into a document's source text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(std::size_t offset) const { return start <= offset && offset < end; }
  std::size_t length() const { return end - start; }

  auto operator<=>(const SourceSpan&) const = default;
  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { error, warning, info };

std::string_view to_string(Severity severity);

/// Stable diagnostic codes. Every Diagnostic carries one of these.
namespace codes {
inline constexpr std::string_view unclosed_group = "unclosed-group";
inline constexpr std::string_view unbalanced_brace = "unbalanced-brace";
inline constexpr std::string_view unbalanced_bracket = "unbalanced-bracket";
inline constexpr std::string_view env_mismatch = "env-mismatch";
inline constexpr std::string_view malformed_environment = "malformed-environment";
inline constexpr std::string_view missing_file = "missing-file";
inline constexpr std::string_view unknown_module_id = "unknown-module-id";
inline constexpr std::string_view redundant_import = "redundant-import";
inline constexpr std::string_view import_cycle = "import-cycle";
inline constexpr std::string_view missing_module_id = "missing-module-id";
inline constexpr std::string_view symdef_outside_module = "symdef-outside-module";
inline constexpr std::string_view symdef_missing_name = "symdef-missing-name";
inline constexpr std::string_view definition_missing_for = "definition-missing-for";
inline constexpr std::string_view build_output = "build-output";
inline constexpr std::string_view build_failed = "build-failed";

/// All registered codes, sorted.
std::span<const std::string_view> all();
bool is_registered(std::string_view code);
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  std::string file;
  SourceSpan span;

  bool operator==(const Diagnostic&) const = default;
};

/// Orders by file, span, severity, code, then message.
bool diagnostic_less(const Diagnostic& a, const Diagnostic& b);

/// Sorts and removes exact duplicates.
void sort_unique(std::vector<Diagnostic>& diagnostics);

}  // namespace flexitex
