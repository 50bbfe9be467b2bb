#pragma once

#include <cstddef>
#include <vector>

#include "cmm/context_model.h"
#include "cmm/decoder.h"
#include "cmm/lattice.h"

namespace cmm {

struct EnumeratedPath {
  std::vector<EdgeId> edge_ids;
  double log_prob = kImpossible;
};

// Every complete path with its exact joint probability, accumulated factor
// by factor without dynamic programming. Throws DataError when more than
// `limit` paths exist.
std::vector<EnumeratedPath> enumerate_paths(const Lattice& lattice,
                                            const ContextModel& model,
                                            std::size_t limit = 10000);

// Reference implementations of the decoder operations by exhaustive search;
// ties resolve through the same path order as the decoder.
PathResult best_by_enumeration(const Lattice& lattice, const ContextModel& model,
                               std::size_t limit = 10000);
std::vector<double> edge_scores_by_enumeration(const Lattice& lattice,
                                               const ContextModel& model,
                                               std::size_t limit = 10000);
Lattice prune_by_enumeration(const Lattice& lattice, const ContextModel& model,
                             double theta, std::size_t limit = 10000);

}  // namespace cmm
