#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cmm {

using Category = std::uint32_t;

// Boundary pseudo-categories framing every layer's Markov chain. They are
// never interned; the model file spells them "<s>" and "</s>".
inline constexpr Category kBoundaryStart = 0xfffffffeu;
inline constexpr Category kBoundaryEnd = 0xffffffffu;

inline constexpr const char* kBoundaryStartName = "<s>";
inline constexpr const char* kBoundaryEndName = "</s>";

// Interns category names to dense ids. Intern order is the order of first
// appearance, so identical inputs yield identical ids on every platform.
class SymbolTable {
 public:
  Category intern(std::string_view name);
  std::optional<Category> find(std::string_view name) const;
  const std::string& name(Category id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Category> ids_;
};

}  // namespace cmm
