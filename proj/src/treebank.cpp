#include "cmm/treebank.h"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmm/errors.h"

namespace cmm {

namespace {

// Character stream that tracks line numbers and drops comment lines.
class TreebankChars {
 public:
  explicit TreebankChars(std::istream& input) : input_(input) {}

  // Returns the next significant character, skipping whitespace and
  // comment lines; 0 at end of input.
  char next_significant() {
    for (;;) {
      bool line_start = at_line_start_;
      int c = get();
      if (c == EOF) return 0;
      if (c == '#' && line_start) {
        while (c != EOF && c != '\n') c = get();
        if (c == EOF) return 0;
        continue;
      }
      if (!std::isspace(static_cast<unsigned char>(c))) return static_cast<char>(c);
    }
  }

  // Reads the remainder of a token started by `first`. Tokens are delimited
  // by whitespace and parentheses.
  std::string read_token(char first) {
    std::string token(1, first);
    for (;;) {
      int c = peek();
      if (c == EOF || c == '(' || c == ')' ||
          std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      token.push_back(static_cast<char>(get()));
    }
    return token;
  }

  int line() const { return line_; }

 private:
  int get() {
    int c = input_.get();
    at_line_start_ = (c == '\n');
    if (c == '\n') ++line_;
    return c;
  }
  int peek() { return input_.peek(); }

  std::istream& input_;
  int line_ = 1;
  bool at_line_start_ = true;
};

std::string unescape_word(const std::string& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size();) {
    if (word.compare(i, 5, "-LRB-") == 0) {
      out.push_back('(');
      i += 5;
    } else if (word.compare(i, 5, "-RRB-") == 0) {
      out.push_back(')');
      i += 5;
    } else {
      out.push_back(word[i]);
      ++i;
    }
  }
  return out;
}

std::string strip_suffix(const std::string& label, char delimiter) {
  if (delimiter == '\0') return label;
  std::size_t pos = label.find(delimiter);
  if (pos == std::string::npos || pos == 0) return label;
  return label.substr(0, pos);
}

[[noreturn]] void fail(const TreebankChars& chars, const std::string& what) {
  std::ostringstream msg;
  msg << "treebank parse error at line " << chars.line() << ": " << what;
  throw ParseError(msg.str());
}

// Parses one parenthesized expression; the opening '(' is already consumed.
SyntaxTree parse_node(TreebankChars& chars, const TreebankOptions& options) {
  char c = chars.next_significant();
  if (c == 0) fail(chars, "end of input inside a tree");
  if (c == '(' || c == ')') fail(chars, "missing node label");
  SyntaxTree tree;
  tree.category = strip_suffix(chars.read_token(c), options.strip_suffix_delimiter);

  for (;;) {
    c = chars.next_significant();
    if (c == 0) fail(chars, "end of input inside a tree (unbalanced parentheses)");
    if (c == ')') break;
    if (c == '(') {
      if (!tree.word.empty()) fail(chars, "leaf token followed by a subtree");
      tree.children.push_back(parse_node(chars, options));
    } else {
      if (!tree.children.empty()) fail(chars, "subtree followed by a bare token");
      if (!tree.word.empty()) fail(chars, "more than one token in a leaf");
      tree.word = unescape_word(chars.read_token(c));
    }
  }

  if (tree.children.empty() && tree.word.empty()) fail(chars, "empty node");
  return tree;
}

}  // namespace

std::vector<SyntaxTree> read_treebank(std::istream& input,
                                      const TreebankOptions& options) {
  TreebankChars chars(input);
  std::vector<SyntaxTree> trees;
  for (;;) {
    char c = chars.next_significant();
    if (c == 0) break;
    if (c != '(') fail(chars, "expected '(' at the start of a tree");
    trees.push_back(parse_node(chars, options));
  }
  return trees;
}

std::vector<SyntaxTree> read_treebank_file(const std::string& path,
                                           const TreebankOptions& options) {
  std::ifstream input(path);
  if (!input) throw ParseError("cannot open treebank file: " + path);
  return read_treebank(input, options);
}

void write_treebank(const std::vector<SyntaxTree>& trees, std::ostream& out) {
  for (const SyntaxTree& tree : trees) out << tree_to_string(tree) << '\n';
}

namespace {

// Emits, left to right, the highest node of layer <= max for each maximal
// span, descending into children wherever a node is still too high.
void cover_layer(const SyntaxTree& tree, int layer, int max, int* position,
                 LayerSequence* out) {
  if (tree.is_leaf() || layer <= max) {
    int width = static_cast<int>(yield_size(tree));
    out->symbols.push_back(tree.category);
    out->spans.emplace_back(*position, *position + width);
    *position += width;
    return;
  }
  for (const SyntaxTree& child : tree.children) {
    cover_layer(child, tree_layer(child), max, position, out);
  }
}

}  // namespace

std::vector<LayerSequence> layer_sequences(const SyntaxTree& tree, int max_layer) {
  if (max_layer < 0) throw ConfigError("max_layer must be >= 0");
  std::vector<LayerSequence> sequences;
  sequences.reserve(static_cast<std::size_t>(max_layer) + 1);
  int root_layer = tree_layer(tree);
  for (int layer = 0; layer <= max_layer; ++layer) {
    LayerSequence seq;
    seq.layer = layer;
    int position = 0;
    cover_layer(tree, root_layer, layer, &position, &seq);
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

void RuleCounts::add_tree(const SyntaxTree& tree) {
  if (tree.is_leaf()) {
    ++lexical[{tree.category, tree.word}];
    return;
  }
  std::vector<std::string> rhs;
  rhs.reserve(tree.children.size());
  for (const SyntaxTree& child : tree.children) rhs.push_back(child.category);
  ++phrase[{tree.category, std::move(rhs)}];
  for (const SyntaxTree& child : tree.children) add_tree(child);
}

std::vector<Rule> collect_rules(const SyntaxTree& tree) {
  RuleCounts counts;
  counts.add_tree(tree);
  std::vector<Rule> rules;
  rules.reserve(counts.phrase.size() + counts.lexical.size());
  for (const auto& [key, count] : counts.phrase) {
    Rule rule;
    rule.lhs = key.first;
    rule.rhs = key.second;
    rule.count = count;
    rules.push_back(std::move(rule));
  }
  for (const auto& [key, count] : counts.lexical) {
    Rule rule;
    rule.lhs = key.first;
    rule.word = key.second;
    rule.lexical = true;
    rule.count = count;
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace cmm
