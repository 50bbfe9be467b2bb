#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cmm/errors.h"
#include "cmm/model.h"
#include "cmm/oracle.h"
#include "support/fixtures.h"

using namespace cmm;

namespace {

std::vector<SyntaxTree> read_string(const std::string& text) {
  std::istringstream in(text);
  return read_treebank(in);
}

}  // namespace

TEST_CASE("a chain lattice has exactly one path") {
  ModelBundle bundle =
      train(read_string("(X (A a) (B b) (C c))"), TrainConfig{.max_layer = 1});
  Lattice lattice = pos_lattice({"a", "b", "c"}, bundle.scfg);
  auto paths = enumerate_paths(lattice, bundle.layer_model(0));
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].edge_ids.size() == 3);
}

TEST_CASE("two alternatives at three positions make eight paths") {
  ModelBundle bundle = train(read_string("(X (A w) (B w) (A v) (B v))"),
                             TrainConfig{.max_layer = 1});
  Lattice lattice = pos_lattice({"w", "w", "w"}, bundle.scfg);
  REQUIRE(lattice.size() == 6);
  auto paths = enumerate_paths(lattice, bundle.layer_model(0));
  CHECK(paths.size() == 8);
}

TEST_CASE("enumeration refuses to explode") {
  ModelBundle bundle = train(read_string("(X (A w) (B w))"), TrainConfig{.max_layer = 1});
  std::vector<std::string> words(14, "w");
  Lattice lattice = pos_lattice(words, bundle.scfg);  // 2^14 paths
  CHECK_THROWS_AS(enumerate_paths(lattice, bundle.layer_model(0), 10000), DataError);
  CHECK_THROWS_AS(enumerate_paths(lattice, bundle.layer_model(0), 3), DataError);
}

TEST_CASE("an empty lattice has no best path") {
  CHECK_THROWS_AS(enumerate_paths(Lattice{}, test::sample_layer1_lattice().model),
                  DataError);

  ModelBundle bundle = train(read_string("(X (A a) (B b))"), TrainConfig{.max_layer = 1});
  Lattice lattice = pos_lattice({"a", "b"}, bundle.scfg);
  std::vector<bool> none(lattice.size(), false);
  Lattice empty = lattice.restricted_to(none);
  CHECK_THROWS_AS(best_by_enumeration(empty, bundle.layer_model(0)), DecodeError);
}

TEST_CASE("a fully expanded toy sentence contains the full phrase path") {
  // Grammar: S -> NP PP, NP -> D N, PP -> P NP; pure unigram smoothing so the
  // path probability is checkable by hand.
  TrainConfig config;
  config.max_layer = 3;
  config.context.lambda_override = InterpolationWeights{1.0, 0.0, 0.0};
  ModelBundle bundle = train(
      read_string("(S (NP (D the) (N dog)) (PP (P in) (NP (D the) (N park))))"),
      config);
  Lattice lattice = pos_lattice({"the", "dog", "in", "the", "park"}, bundle.scfg);
  lattice = expand_layer(lattice, bundle.scfg);
  lattice = expand_layer(lattice, bundle.scfg);

  Category np = *bundle.symbols()->find("NP");
  Category pp = *bundle.symbols()->find("PP");
  auto np_edge = lattice.find(0, 2, np);
  auto pp_edge = lattice.find(2, 5, pp);
  REQUIRE(np_edge.has_value());
  REQUIRE(pp_edge.has_value());

  auto paths = enumerate_paths(lattice, bundle.layer_model(2));
  const EnumeratedPath* full = nullptr;
  for (const EnumeratedPath& path : paths) {
    if (path.edge_ids == std::vector<EdgeId>{*np_edge, *pp_edge}) full = &path;
  }
  REQUIRE(full != nullptr);

  // Layer-2 events are NP, PP and the end marker, 1/3 each; the words give
  // delta(NP) = 1/2 and delta(PP) = 1/2.
  double expected = 3 * std::log(1.0 / 3.0) + std::log(0.5) + std::log(0.5);
  CHECK(full->log_prob == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("enumeration agrees with itself on repeated runs") {
  std::mt19937_64 rng(5);
  auto instance = test::random_instance(rng);
  while (!instance) instance = test::random_instance(rng);
  const ContextModel& model = instance->bundle.layer_model(instance->decode_layer);
  auto first = enumerate_paths(instance->lattice, model);
  auto second = enumerate_paths(instance->lattice, model);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].edge_ids == second[i].edge_ids);
    CHECK(first[i].log_prob == second[i].log_prob);
  }
}
