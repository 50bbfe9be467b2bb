#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cmm/context_model.h"
#include "cmm/lattice.h"
#include "cmm/model.h"
#include "cmm/tree.h"

namespace cmm::test {

// The running example: a 14-token German sentence whose tree reaches layer 4.
extern const char* kGermanSampleBracketing;
SyntaxTree german_sample_tree();

// Expected per-layer training sequences of the sample tree.
const std::vector<std::vector<std::string>>& german_sample_layers();

// Minimal deterministic corpus: a single prepositional phrase.
std::vector<SyntaxTree> pp_toy_corpus();

// Synthetic corpus drawn from a small subject-verb-object grammar whose
// trees reach exactly layer 3. With attachment_ambiguity > 0 a share of
// sentences carries a prepositional phrase that is attached to the object
// or to the verb phrase at random, which no parser can always get right.
struct ToyCorpusConfig {
  std::size_t sentences = 1000;
  std::uint64_t seed = 42;
  double attachment_ambiguity = 0.0;
};
std::vector<SyntaxTree> toy_corpus(const ToyCorpusConfig& config);

// Hand-built layer-1 hypothesis lattice for the sample sentence with fixed
// yield probabilities, plus a uniform context model under which the known
// best path is optimal.
struct SampleLattice {
  std::shared_ptr<SymbolTable> symbols;
  Lattice lattice;
  ContextModel model;
  // (start, end, category) of the expected best path, left to right.
  std::vector<std::tuple<int, int, std::string>> best_path;
};
SampleLattice sample_layer1_lattice();

// Randomized decoder instance: a bundle trained on a random corpus and a
// lattice built from a random sentence by tagging plus one or two layers of
// expansion. Instances that would enumerate past `path_limit` come back
// empty; callers draw again.
struct RandomInstance {
  ModelBundle bundle;
  Lattice lattice;
  int decode_layer = 1;
};
std::optional<RandomInstance> random_instance(std::mt19937_64& rng,
                                              std::size_t path_limit = 10000);

}  // namespace cmm::test
