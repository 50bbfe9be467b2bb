#include "cmm/symbols.h"

#include "cmm/errors.h"

namespace cmm {

Category SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  if (name == kBoundaryStartName || name == kBoundaryEndName) {
    throw DataError("category name is reserved for sequence boundaries: " +
                    std::string(name));
  }
  Category id = static_cast<Category>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<Category> SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolTable::name(Category id) const {
  static const std::string start_name = kBoundaryStartName;
  static const std::string end_name = kBoundaryEndName;
  if (id == kBoundaryStart) return start_name;
  if (id == kBoundaryEnd) return end_name;
  return names_.at(id);
}

}  // namespace cmm
