#include "cmm/tree.h"

#include <algorithm>

namespace cmm {

SyntaxTree SyntaxTree::leaf(std::string tag, std::string word) {
  SyntaxTree t;
  t.category = std::move(tag);
  t.word = std::move(word);
  return t;
}

SyntaxTree SyntaxTree::node(std::string category, std::vector<SyntaxTree> children) {
  SyntaxTree t;
  t.category = std::move(category);
  t.children = std::move(children);
  return t;
}

int tree_layer(const SyntaxTree& tree) {
  if (tree.is_leaf()) return 0;
  int highest = 0;
  for (const SyntaxTree& child : tree.children) {
    highest = std::max(highest, tree_layer(child));
  }
  return highest + 1;
}

static void collect_yield(const SyntaxTree& tree, std::vector<Token>* out) {
  if (tree.is_leaf()) {
    out->push_back(Token{tree.word, tree.category});
    return;
  }
  for (const SyntaxTree& child : tree.children) collect_yield(child, out);
}

std::vector<Token> tree_yield(const SyntaxTree& tree) {
  std::vector<Token> tokens;
  collect_yield(tree, &tokens);
  return tokens;
}

std::size_t yield_size(const SyntaxTree& tree) {
  if (tree.is_leaf()) return 1;
  std::size_t n = 0;
  for (const SyntaxTree& child : tree.children) n += yield_size(child);
  return n;
}

static void escape_word(const std::string& word, std::string* out) {
  for (char c : word) {
    if (c == '(') {
      out->append("-LRB-");
    } else if (c == ')') {
      out->append("-RRB-");
    } else {
      out->push_back(c);
    }
  }
}

static void append_tree(const SyntaxTree& tree, std::string* out) {
  out->push_back('(');
  out->append(tree.category);
  if (tree.is_leaf()) {
    out->push_back(' ');
    escape_word(tree.word, out);
  } else {
    for (const SyntaxTree& child : tree.children) {
      out->push_back(' ');
      append_tree(child, out);
    }
  }
  out->push_back(')');
}

std::string tree_to_string(const SyntaxTree& tree) {
  std::string out;
  append_tree(tree, &out);
  return out;
}

}  // namespace cmm
