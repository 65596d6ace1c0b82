#pragma once

#include "flexitex/registry.hpp"

#include <memory>
#include <string_view>

namespace flexitex {

namespace tags {
inline constexpr std::string_view import_command = "kwarc.info.mkmide.latex.importmodule.commandtag";
inline constexpr std::string_view import_file = "kwarc.info.mkmide.latex.importmodule.filetag";
inline constexpr std::string_view import_id = "kwarc.info.mkmide.latex.importmodule.symboltag";
inline constexpr std::string_view module_begin = "stex.module.begin";
inline constexpr std::string_view module_id = "stex.module.id";
inline constexpr std::string_view symdef_command = "stex.symdef.command";
inline constexpr std::string_view symdef_name = "stex.symdef.name";
inline constexpr std::string_view definition_command = "stex.definition.command";
inline constexpr std::string_view definition_for = "stex.definition.definitionfor";
inline constexpr std::string_view definition_text = "stex.definition.definitionText";
}  // namespace tags

namespace categories {
inline constexpr std::string_view command = kCommandCategory;
inline constexpr std::string_view external_ref = kExternalRefCategory;
inline constexpr std::string_view module_name = "kwarc.info.mkmide.latex.syntaxhighlighting.moduleName";
inline constexpr std::string_view symbol_name = "kwarc.info.mkmide.latex.syntaxhighlighting.symbolName";
inline constexpr std::string_view definiendum = "kwarc.info.mkmide.latex.syntaxhighlighting.definiendum";
}  // namespace categories

std::shared_ptr<const ExtensionHandler> make_importmodule_handler();
std::shared_ptr<const ExtensionHandler> make_module_handler();
std::shared_ptr<const ExtensionHandler> make_symdef_handler();
std::shared_ptr<const ExtensionHandler> make_definition_handler();

/// Registry with the four sTeX handlers: module, importmodule, symdef,
/// definition.
Registry standard_registry();

}  // namespace flexitex
