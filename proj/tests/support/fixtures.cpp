#include "support/fixtures.h"

#include <cmath>
#include <sstream>

#include "cmm/oracle.h"
#include "cmm/treebank.h"

namespace cmm::test {

const char* kGermanSampleBracketing =
    "(S (NP (ART Ein) (ADJA enormer) (NN Posten)"
    " (PP (APPR an) (CNP (NN Arbeit) (KON und) (NN Geld))))"
    " (VAFIN wird)"
    " (VP (PP (APPR von) (ART den) (CARD 37) (ADJA beteiligten) (NN Vereinen))"
    " (VVPP aufgebracht)))";

SyntaxTree german_sample_tree() {
  std::istringstream in(kGermanSampleBracketing);
  return read_treebank(in).at(0);
}

const std::vector<std::vector<std::string>>& german_sample_layers() {
  static const std::vector<std::vector<std::string>> layers = {
      {"ART", "ADJA", "NN", "APPR", "NN", "KON", "NN", "VAFIN", "APPR", "ART",
       "CARD", "ADJA", "NN", "VVPP"},
      {"ART", "ADJA", "NN", "APPR", "CNP", "VAFIN", "PP", "VVPP"},
      {"ART", "ADJA", "NN", "PP", "VAFIN", "VP"},
      {"NP", "VAFIN", "VP"},
      {"S"},
  };
  return layers;
}

std::vector<SyntaxTree> pp_toy_corpus() {
  std::istringstream in("(PP (P in) (NP (D the) (N park)))");
  return read_treebank(in);
}

namespace {

template <typename Rng>
const char* pick(Rng& rng, const std::vector<const char*>& words) {
  return words[rng() % words.size()];
}

const std::vector<const char*> kDeterminers = {"the", "a"};
const std::vector<const char*> kAdjectives = {"big", "red", "old"};
const std::vector<const char*> kNouns = {"dog", "cat", "park", "man", "car"};
const std::vector<const char*> kVerbs = {"sees", "likes", "finds"};
const std::vector<const char*> kPrepositions = {"in", "with", "near"};

template <typename Rng>
SyntaxTree sample_np(Rng& rng) {
  std::vector<SyntaxTree> children;
  children.push_back(SyntaxTree::leaf("D", pick(rng, kDeterminers)));
  if (rng() % 2 == 0) {
    children.push_back(SyntaxTree::leaf("A", pick(rng, kAdjectives)));
  }
  children.push_back(SyntaxTree::leaf("N", pick(rng, kNouns)));
  return SyntaxTree::node("NP", std::move(children));
}

template <typename Rng>
SyntaxTree sample_pp(Rng& rng) {
  std::vector<SyntaxTree> children;
  children.push_back(SyntaxTree::leaf("P", pick(rng, kPrepositions)));
  children.push_back(sample_np(rng));
  return SyntaxTree::node("PP", std::move(children));
}

}  // namespace

std::vector<SyntaxTree> toy_corpus(const ToyCorpusConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::vector<SyntaxTree> corpus;
  corpus.reserve(config.sentences);
  for (std::size_t i = 0; i < config.sentences; ++i) {
    SyntaxTree subject = sample_np(rng);
    SyntaxTree verb = SyntaxTree::leaf("V", pick(rng, kVerbs));
    SyntaxTree object = sample_np(rng);

    bool ambiguous =
        config.attachment_ambiguity > 0.0 &&
        (static_cast<double>(rng() % 1000) / 1000.0) < config.attachment_ambiguity;
    SyntaxTree vp;
    if (!ambiguous) {
      vp = SyntaxTree::node("VP", {std::move(verb), std::move(object)});
    } else {
      // The attached reading dominates 9:1, so a trained parser attaches
      // every time and overshoots exactly on the flat-annotated sentences.
      SyntaxTree pp = sample_pp(rng);
      if (rng() % 10 < 9) {
        SyntaxTree attached =
            SyntaxTree::node("NP", {std::move(object), std::move(pp)});
        vp = SyntaxTree::node("VP", {std::move(verb), std::move(attached)});
      } else {
        vp = SyntaxTree::node("VP", {std::move(verb), std::move(object), std::move(pp)});
      }
    }
    corpus.push_back(SyntaxTree::node("S", {std::move(subject), std::move(vp)}));
  }
  return corpus;
}

SampleLattice sample_layer1_lattice() {
  auto symbols = std::make_shared<SymbolTable>();
  const std::vector<std::string> words = {
      "Ein", "enormer",     "Posten",  "an",         "Arbeit",
      "und", "Geld",        "wird",    "von",        "den",
      "37",  "beteiligten", "Vereinen", "aufgebracht"};

  struct Bar {
    int start;
    int end;
    const char* category;
    double neg_log_delta;
  };
  // One entry per hypothesis bar: POS edges first, then the phrases a
  // treebank grammar licenses over them.
  const std::vector<Bar> bars = {
      {0, 1, "ART", 3.40},    {1, 2, "ADJA", 3.01},  {2, 3, "NN", 5.32},
      {3, 4, "APPR", 2.90},   {4, 5, "NN", 3.92},    {5, 6, "KON", 1.80},
      {6, 7, "NN", 4.06},     {7, 8, "VAFIN", 2.51}, {8, 9, "APPR", 2.49},
      {9, 10, "ART", 2.32},   {10, 11, "CARD", 5.48}, {11, 12, "ADJA", 5.68},
      {12, 13, "NN", 4.95},   {13, 14, "VVPP", 5.25},
      {0, 2, "NP", 6.60},     {0, 3, "NP", 9.68},    {1, 3, "AP", 10.28},
      {1, 3, "NP", 7.69},     {3, 5, "AP", 9.25},    {3, 5, "PP", 6.38},
      {4, 7, "CNP", 9.05},    {6, 8, "VP", 9.00},    {8, 10, "PP", 6.22},
      {8, 10, "AVP", 6.88},   {8, 11, "PP", 10.23},  {8, 13, "PP", 17.96},
      {9, 11, "NP", 8.63},    {9, 11, "NM", 9.23},   {10, 12, "AP", 11.55},
      {10, 12, "NP", 12.24},  {11, 13, "NP", 11.51},
  };

  Lattice lattice(words, 1, symbols);
  RuleId next_rule = 0;
  for (const Bar& bar : bars) {
    Category category = symbols->intern(bar.category);
    Edge edge;
    edge.start = bar.start;
    edge.end = bar.end;
    edge.category = category;
    edge.log_delta = -bar.neg_log_delta;
    if (bar.end - bar.start == 1) {
      edge.derivation =
          make_leaf_derivation(category, words[bar.start], -bar.neg_log_delta);
      edge.origin_layer = 0;
    } else {
      std::vector<DerivationPtr> children;
      for (int i = bar.start; i < bar.end; ++i) {
        children.push_back(make_leaf_derivation(symbols->intern("X"), words[i], 0.0));
      }
      edge.derivation = make_phrase_derivation(category, next_rule++,
                                               -bar.neg_log_delta, std::move(children));
      edge.origin_layer = 1;
    }
    lattice.insert(std::move(edge));
  }

  // Uniform unigram context model over the full inventory.
  std::vector<std::pair<Category, double>> unigrams;
  double log_uniform = std::log(1.0 / (symbols->size() + 1.0));
  for (Category id = 0; id < symbols->size(); ++id) unigrams.emplace_back(id, log_uniform);
  unigrams.emplace_back(kBoundaryEnd, log_uniform);
  ContextModel model = ContextModel::from_parameters(
      1, InterpolationWeights{1.0, 0.0, 0.0}, symbols->size() + 1, unigrams, {}, {});

  SampleLattice fixture{symbols, std::move(lattice), std::move(model), {}};
  fixture.best_path = {
      {0, 3, "NP"}, {3, 4, "APPR"}, {4, 7, "CNP"},
      {7, 8, "VAFIN"}, {8, 13, "PP"}, {13, 14, "VVPP"},
  };
  return fixture;
}

namespace {

const std::vector<const char*> kRandomTags = {"T1", "T2", "T3", "T4"};
const std::vector<const char*> kRandomWords = {"w1", "w2", "w3", "w4", "w5", "w6"};
const std::vector<const char*> kRandomPhrases = {"X", "Y", "Z"};

SyntaxTree random_tree(std::mt19937_64& rng, int depth) {
  if (depth == 0) {
    return SyntaxTree::leaf(kRandomTags[rng() % kRandomTags.size()],
                            kRandomWords[rng() % kRandomWords.size()]);
  }
  std::size_t arity = 1 + rng() % 3;
  std::vector<SyntaxTree> children;
  for (std::size_t i = 0; i < arity; ++i) {
    children.push_back(random_tree(rng, static_cast<int>(rng() % depth)));
  }
  return SyntaxTree::node(kRandomPhrases[rng() % kRandomPhrases.size()],
                          std::move(children));
}

}  // namespace

std::optional<RandomInstance> random_instance(std::mt19937_64& rng,
                                              std::size_t path_limit) {
  std::vector<SyntaxTree> corpus;
  std::size_t trees = 8 + rng() % 16;
  for (std::size_t i = 0; i < trees; ++i) {
    corpus.push_back(random_tree(rng, 1 + static_cast<int>(rng() % 2)));
  }

  TrainConfig config;
  config.max_layer = 2;
  if (rng() % 2 == 0) {
    // Exercise fixed weights as well as the estimated ones.
    double l1 = 0.2 + 0.1 * static_cast<double>(rng() % 4);
    double l2 = (1.0 - l1) * 0.5;
    config.context.lambda_override = InterpolationWeights{l1, l2, 1.0 - l1 - l2};
  }

  ModelBundle bundle;
  try {
    bundle = train(corpus, config);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }

  std::size_t length = 1 + rng() % 8;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < length; ++i) {
    words.push_back(kRandomWords[rng() % kRandomWords.size()]);
  }

  RandomInstance instance{std::move(bundle), Lattice{}, 1};
  try {
    Lattice lattice = pos_lattice(words, instance.bundle.scfg);
    lattice = expand_layer(lattice, instance.bundle.scfg);
    if (rng() % 2 == 0) {
      instance.decode_layer = 2;
      lattice = prune(lattice, instance.bundle.layer_model(1), 10.0);
      lattice = expand_layer(lattice, instance.bundle.scfg);
    }
    enumerate_paths(lattice, instance.bundle.layer_model(instance.decode_layer),
                    path_limit);
    instance.lattice = std::move(lattice);
  } catch (const std::runtime_error&) {
    return std::nullopt;  // unparseable or too many paths for the oracle
  }
  return instance;
}

}  // namespace cmm::test
