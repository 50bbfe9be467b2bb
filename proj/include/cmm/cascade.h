#pragma once

#include <string>
#include <vector>

#include "cmm/lattice.h"
#include "cmm/model.h"
#include "cmm/tree.h"

namespace cmm {

struct ParseOptions {
  double theta = 5.0;
  // Decode this many phrase layers; -1 means the bundle's full cascade.
  int max_layer = -1;
  // Record each layer's hypothesis lattice for the lattice-dump format.
  bool keep_lattices = false;
  // Cross-check every layer's best path against exhaustive enumeration
  // (small inputs only).
  bool oracle_check = false;
};

// Forest output of the cascade: the top layer's best path rendered as
// trees, with never-attached tokens as singleton leaves.
struct PartialParse {
  std::vector<Token> tokens;      // words with the tags of the final path
  std::vector<SyntaxTree> forest;
  double log_prob = kImpossible;
  std::vector<Lattice> layer_lattices;  // filled when keep_lattices is set
};

// Tags the words, then alternately prunes with theta and expands with the
// grammar, layer by layer; the result reads off the top layer's best path.
// Tags are whatever the final path's derivations chose, so a higher layer
// may override a locally better tag.
PartialParse parse_sentence(const std::vector<std::string>& words,
                            const ModelBundle& bundle,
                            const ParseOptions& options = {});

// formats: "brackets" (bracketed forest on one line), "tsv" (token, tag,
// innermost chunk as B-X/I-X/O), "lattice-dump" (per-layer hypothesis dump;
// requires keep_lattices).
std::string render(const PartialParse& parse, const std::string& format);

SyntaxTree derivation_to_tree(const DerivationNode& derivation,
                              const SymbolTable& symbols);

}  // namespace cmm
