#pragma once

#include <string>
#include <string_view>

// IRIs used by the index.
namespace flexitex::vocab {

inline constexpr std::string_view rdf_ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view ide_ns = "urn:flexitex:ide#";
inline constexpr std::string_view oo_ns = "urn:flexitex:oo#";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";

inline const std::string rdf_type = std::string(rdf_ns) + "type";
inline const std::string rdf_seq = std::string(rdf_ns) + "Seq";
inline const std::string rdf_id = std::string(rdf_ns) + "id";
inline std::string rdf_member(std::size_t n) { return std::string(rdf_ns) + "_" + std::to_string(n); }

inline const std::string ide_document = std::string(ide_ns) + "Document";
inline const std::string ide_file = std::string(ide_ns) + "file";
inline const std::string ide_start = std::string(ide_ns) + "start";
inline const std::string ide_end = std::string(ide_ns) + "end";
inline const std::string ide_has_module = std::string(ide_ns) + "hasModule";
inline const std::string ide_has_symbol = std::string(ide_ns) + "hasSymbol";
inline const std::string ide_has_import = std::string(ide_ns) + "hasImport";
inline const std::string ide_import_module_command = std::string(ide_ns) + "importModuleCommand";
inline const std::string ide_module_file = std::string(ide_ns) + "moduleFile";
inline const std::string ide_resolved_file = std::string(ide_ns) + "resolvedFile";
inline const std::string ide_module_id = std::string(ide_ns) + "moduleId";
inline const std::string ide_symbol = std::string(ide_ns) + "Symbol";
inline const std::string ide_name = std::string(ide_ns) + "name";
inline const std::string ide_arity = std::string(ide_ns) + "arity";
inline const std::string ide_presentation = std::string(ide_ns) + "presentation";
inline const std::string ide_for = std::string(ide_ns) + "for";
/// The `for` names in source order, joined by ','.
inline const std::string ide_definiendum = std::string(ide_ns) + "definiendum";
inline const std::string ide_text = std::string(ide_ns) + "text";
inline const std::string ide_title = std::string(ide_ns) + "title";
inline const std::string ide_anonymous = std::string(ide_ns) + "anonymous";

inline const std::string oo_theory = std::string(oo_ns) + "Theory";
inline const std::string oo_definition = std::string(oo_ns) + "Definition";
inline const std::string oo_part_of = std::string(oo_ns) + "partOf";

}  // namespace flexitex::vocab
