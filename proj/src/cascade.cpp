#include "cmm/cascade.h"

#include <cmath>
#include <sstream>

#include "cmm/decoder.h"
#include "cmm/errors.h"
#include "cmm/oracle.h"

namespace cmm {

SyntaxTree derivation_to_tree(const DerivationNode& derivation,
                              const SymbolTable& symbols) {
  if (derivation.is_leaf()) {
    return SyntaxTree::leaf(symbols.name(derivation.category), derivation.word);
  }
  std::vector<SyntaxTree> children;
  children.reserve(derivation.children.size());
  for (const DerivationPtr& child : derivation.children) {
    children.push_back(derivation_to_tree(*child, symbols));
  }
  return SyntaxTree::node(symbols.name(derivation.category), std::move(children));
}

namespace {

void check_against_oracle(const Lattice& lattice, const ContextModel& model,
                          const PathResult& decoded) {
  PathResult reference = best_by_enumeration(lattice, model);
  bool same = reference.edge_ids == decoded.edge_ids &&
              std::abs(reference.log_prob - decoded.log_prob) <= 1e-9;
  if (!same) {
    throw DecodeError("decoder disagrees with exhaustive enumeration");
  }
}

}  // namespace

PartialParse parse_sentence(const std::vector<std::string>& words,
                            const ModelBundle& bundle, const ParseOptions& options) {
  if (!(options.theta >= 1.0)) throw ConfigError("theta must be >= 1");
  int top = options.max_layer < 0 ? bundle.max_layer : options.max_layer;
  if (top < 0 || top > bundle.max_layer) {
    throw ConfigError("requested layer exceeds the trained cascade");
  }

  PartialParse parse;
  Lattice lattice = pos_lattice(words, bundle.scfg);
  if (options.keep_lattices) parse.layer_lattices.push_back(lattice);
  for (int layer = 0; layer < top; ++layer) {
    if (options.oracle_check) {
      check_against_oracle(lattice, bundle.layer_model(layer),
                           best_path(lattice, bundle.layer_model(layer)));
    }
    lattice = prune(lattice, bundle.layer_model(layer), options.theta);
    lattice = expand_layer(lattice, bundle.scfg);
    if (options.keep_lattices) parse.layer_lattices.push_back(lattice);
  }

  PathResult best = best_path(lattice, bundle.layer_model(top));
  if (options.oracle_check) {
    check_against_oracle(lattice, bundle.layer_model(top), best);
  }

  const SymbolTable& symbols = *bundle.symbols();
  parse.log_prob = best.log_prob;
  parse.forest.reserve(best.edges.size());
  for (const Edge& edge : best.edges) {
    parse.forest.push_back(derivation_to_tree(*edge.derivation, symbols));
    for (const Token& token : tree_yield(parse.forest.back())) {
      parse.tokens.push_back(token);
    }
  }
  return parse;
}

namespace {

std::string render_brackets(const PartialParse& parse) {
  std::string out;
  for (std::size_t i = 0; i < parse.forest.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.append(tree_to_string(parse.forest[i]));
  }
  return out;
}

// Innermost chunk per token: the category of the leaf's immediate parent
// node, IOB2-marked. Distinct parent instances get distinct chunk numbers so
// adjacent same-category chunks still break correctly.
void chunk_labels(const SyntaxTree& tree, int* next_instance, int parent_instance,
                  const std::string& parent_category,
                  std::vector<std::pair<int, std::string>>* per_token) {
  if (tree.is_leaf()) {
    per_token->emplace_back(parent_instance, parent_category);
    return;
  }
  int instance = (*next_instance)++;
  for (const SyntaxTree& child : tree.children) {
    chunk_labels(child, next_instance, instance, tree.category, per_token);
  }
}

std::string render_tsv(const PartialParse& parse) {
  std::vector<std::pair<int, std::string>> per_token;
  int next_instance = 0;
  for (const SyntaxTree& tree : parse.forest) {
    chunk_labels(tree, &next_instance, -1, "", &per_token);
  }
  std::ostringstream out;
  int previous_instance = -1;
  for (std::size_t i = 0; i < parse.tokens.size(); ++i) {
    const auto& [instance, category] = per_token[i];
    std::string label = "O";
    if (instance >= 0) {
      label = (instance == previous_instance ? "I-" : "B-") + category;
    }
    previous_instance = instance;
    out << parse.tokens[i].word << '\t' << parse.tokens[i].tag << '\t' << label << '\n';
  }
  return out.str();
}

std::string render_lattice_dump(const PartialParse& parse) {
  std::ostringstream out;
  for (const Lattice& lattice : parse.layer_lattices) {
    out << "# layer " << lattice.layer() << '\n' << lattice.dump();
  }
  return out.str();
}

}  // namespace

std::string render(const PartialParse& parse, const std::string& format) {
  if (format == "brackets") return render_brackets(parse);
  if (format == "tsv") return render_tsv(parse);
  if (format == "lattice-dump") return render_lattice_dump(parse);
  throw ConfigError("unknown output format: " + format);
}

}  // namespace cmm
