#pragma once

#include "flexitex/extension.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flexitex {

/// Catalog of extension handlers. Every command name, environment name and
/// tag has at most one owner.
class Registry {
 public:
  /// Throws ExtensionError naming both handlers on any collision.
  void add(std::shared_ptr<const ExtensionHandler> handler);

  const std::vector<std::shared_ptr<const ExtensionHandler>>& handlers() const { return handlers_; }

  /// Throws ExtensionError for tags no handler declares.
  const ExtensionHandler& handler_for_tag(std::string_view tag) const;
  const ExtensionHandler* handler_for_command(std::string_view name) const;
  const ExtensionHandler* handler_for_environment(std::string_view name) const;
  const ExtensionHandler* wildcard_handler() const { return wildcard_; }
  const ExtensionHandler* find(std::string_view id) const;

  /// Sorted names of all handled environments.
  std::vector<std::string> environment_names() const;

  /// The same registry without the handler `id`.
  Registry without(std::string_view id) const;

 private:
  std::vector<std::shared_ptr<const ExtensionHandler>> handlers_;
  std::map<std::string, const ExtensionHandler*, std::less<>> by_command_;
  std::map<std::string, const ExtensionHandler*, std::less<>> by_environment_;
  std::map<std::string, const ExtensionHandler*, std::less<>> by_tag_;
  const ExtensionHandler* wildcard_ = nullptr;
};

/// The handler that receives `command`, if any. `\end` is never dispatched.
const ExtensionHandler* dispatch_target(const Registry& registry, const Document& doc, NodeId command);

/// Clears all tags, then runs every responsible handler's add_node_tags on
/// each command in document order.
Document tag_document(const Registry& registry, Document doc);

}  // namespace flexitex
