#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cmm {

struct Token {
  std::string word;
  std::string tag;

  bool operator==(const Token&) const = default;
};

// A treebank parse. A leaf carries a token (category is its POS tag); an
// internal node carries a phrase category and one or more children. The
// layer of a node is its height above the terminal layer: leaves sit at
// layer 0, an internal node one above its highest child.
struct SyntaxTree {
  std::string category;
  std::string word;                  // leaves only
  std::vector<SyntaxTree> children;  // empty for leaves

  bool is_leaf() const { return children.empty(); }

  static SyntaxTree leaf(std::string tag, std::string word);
  static SyntaxTree node(std::string category, std::vector<SyntaxTree> children);

  bool operator==(const SyntaxTree&) const = default;
};

int tree_layer(const SyntaxTree& tree);

std::vector<Token> tree_yield(const SyntaxTree& tree);
std::size_t yield_size(const SyntaxTree& tree);

// Single-line bracketed form, the exact inverse of the treebank reader.
std::string tree_to_string(const SyntaxTree& tree);

}  // namespace cmm
