// cmm -- a cascaded Markov model partial parser.
//
// Subcommands: train a model from a bracketed treebank, parse tokenized
// sentences, run a cross-validated chunking evaluation, or inspect the
// per-layer hypothesis lattices of single sentences.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cmm/cascade.h"
#include "cmm/decoder.h"
#include "cmm/errors.h"
#include "cmm/eval.h"
#include "cmm/model.h"
#include "cmm/treebank.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int thread_budget() {
  if (const char* env = std::getenv("CMM_THREADS")) {
    int n = std::atoi(env);
    return n > 0 ? n : 1;
  }
  return 1;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string word;
  while (in >> word) words.push_back(word);
  return words;
}

std::vector<std::string> read_sentences(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Applies fn to every index on up to `threads` workers; results come back
// in input order regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(n);
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

struct TrainArgs {
  std::string corpus;
  std::string out;
  int layers = 9;
  std::size_t open_class_threshold = 50;
  std::string strip_suffix;
};

int cmd_train(const TrainArgs& args) {
  cmm::TreebankOptions treebank;
  if (!args.strip_suffix.empty()) treebank.strip_suffix_delimiter = args.strip_suffix[0];
  std::vector<cmm::SyntaxTree> trees = cmm::read_treebank_file(args.corpus, treebank);

  cmm::TrainConfig config;
  config.max_layer = args.layers;
  config.scfg.open_class_threshold = args.open_class_threshold;
  cmm::ModelBundle bundle = cmm::train(trees, config);
  cmm::save_model_file(bundle, args.out);

  std::cerr << "sentences: " << bundle.stats.sentences << "\n"
            << "tokens: " << bundle.stats.tokens << "\n"
            << "phrase rules: " << bundle.scfg.rules().size() << "\n"
            << "lexicon tags: " << bundle.scfg.lexicon().size() << "\n";
  for (const cmm::ContextModel& model : bundle.context_models) {
    std::cerr << "layer " << model.layer() << ": " << model.inventory().size()
              << " categories, " << model.total_events() << " events\n";
  }
  return kExitOk;
}

struct ParseArgs {
  std::string model;
  std::string input;
  std::string out;
  double theta = 5.0;
  int layers = -1;
  std::string format = "brackets";
  bool strict = false;
  bool oracle_check = false;
};

int cmd_parse(const ParseArgs& args) {
  if (!(args.theta >= 1.0)) throw cmm::ConfigError("theta must be >= 1");
  cmm::ModelBundle bundle = cmm::load_model_file(args.model);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (!args.input.empty()) {
    file_in.open(args.input);
    if (!file_in) throw cmm::DataError("cannot open input file: " + args.input);
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    file_out.open(args.out);
    if (!file_out) throw cmm::DataError("cannot open output file: " + args.out);
    out = &file_out;
  }

  cmm::ParseOptions options;
  options.theta = args.theta;
  options.max_layer = args.layers;
  options.oracle_check = args.oracle_check;
  options.keep_lattices = (args.format == "lattice-dump");

  std::vector<std::string> sentences = read_sentences(*in);
  std::vector<std::string> records(sentences.size());
  std::vector<std::string> errors(sentences.size());

  parallel_for(sentences.size(), thread_budget(), [&](std::size_t i) {
    std::vector<std::string> words = split_words(sentences[i]);
    if (words.empty()) return;
    try {
      cmm::PartialParse parse = cmm::parse_sentence(words, bundle, options);
      records[i] = cmm::render(parse, args.format);
    } catch (const std::runtime_error& error) {
      errors[i] = error.what();
    }
  });

  bool failed = false;
  bool multiline = (args.format != "brackets");
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!errors[i].empty()) {
      failed = true;
      *out << "# error sentence " << (i + 1) << ": " << errors[i] << "\n";
      if (multiline) *out << "\n";
      continue;
    }
    // Bracket records are bare lines; multi-line records already end with a
    // newline and get a blank separator.
    *out << records[i] << "\n";
  }
  return (failed && args.strict) ? kExitData : kExitOk;
}

struct EvalArgs {
  std::string corpus;
  std::string out;
  int layers = 9;
  double theta = 5.0;
  double beta = 1.0;
  bool unlabeled = false;
  std::uint64_t seed = 1;
  int repetitions = 10;
  std::size_t open_class_threshold = 50;
};

int cmd_eval(const EvalArgs& args) {
  std::vector<cmm::SyntaxTree> trees = cmm::read_treebank_file(args.corpus);
  cmm::CrossValidationConfig config;
  config.train.max_layer = args.layers;
  config.train.scfg.open_class_threshold = args.open_class_threshold;
  config.theta = args.theta;
  config.beta = args.beta;
  config.labeled = !args.unlabeled;
  config.seed = args.seed;
  config.repetitions = args.repetitions;

  std::string report = cmm::report_to_tsv(cmm::cross_validate(trees, config));
  if (args.out.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(args.out);
    if (!out) throw cmm::DataError("cannot open output file: " + args.out);
    out << report;
  }
  return kExitOk;
}

struct InspectArgs {
  std::string model;
  std::string sentence;
  double theta = 5.0;
  int layers = -1;
  bool accumulators = false;
};

int cmd_inspect(const InspectArgs& args) {
  cmm::ModelBundle bundle = cmm::load_model_file(args.model);
  std::vector<std::string> words = split_words(args.sentence);
  if (words.empty()) throw cmm::ConfigError("empty sentence");

  cmm::ParseOptions options;
  options.theta = args.theta;
  options.max_layer = args.layers;
  options.keep_lattices = true;
  cmm::PartialParse parse = cmm::parse_sentence(words, bundle, options);

  for (const cmm::Lattice& lattice : parse.layer_lattices) {
    std::cout << "# layer " << lattice.layer() << "\n" << lattice.dump();
    if (args.accumulators) {
      std::cout << "# accumulators layer " << lattice.layer() << "\n"
                << cmm::dump_accumulators(lattice,
                                          bundle.layer_model(lattice.layer()));
    }
  }
  std::cout << "# best " << cmm::render(parse, "brackets") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascaded Markov model partial parser"};
  app.require_subcommand(1);
  // Precedence: command-line flags beat config-file values beat defaults.
  app.set_config("--config", "", "INI file with per-subcommand sections");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "estimate a model from a treebank");
  train->configurable();
  train->add_option("--corpus", train_args.corpus, "bracketed treebank file")->required();
  train->add_option("--out", train_args.out, "model file to write")->required();
  train->add_option("--layers", train_args.layers, "number of phrase layers");
  train->add_option("--open-class-threshold", train_args.open_class_threshold,
                    "distinct words above which a tag may emit unknowns");
  train->add_option("--strip-suffix", train_args.strip_suffix,
                    "cut category labels at this delimiter");

  ParseArgs parse_args;
  CLI::App* parse = app.add_subcommand("parse", "parse tokenized sentences");
  parse->configurable();
  parse->add_option("--model", parse_args.model, "model file")->required();
  parse->add_option("--input", parse_args.input, "sentence file (default stdin)");
  parse->add_option("--out", parse_args.out, "output file (default stdout)");
  parse->add_option("--theta", parse_args.theta, "ambiguity threshold (>= 1)");
  parse->add_option("--layers", parse_args.layers, "cascade depth override");
  parse->add_option("--format", parse_args.format, "brackets | tsv | lattice-dump")
      ->check(CLI::IsMember({"brackets", "tsv", "lattice-dump"}));
  parse->add_flag("--strict", parse_args.strict, "nonzero exit on sentence errors");
  parse->add_flag("--oracle-check", parse_args.oracle_check,
                  "verify each layer against exhaustive enumeration");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "cross-validated chunking evaluation");
  eval->configurable();
  eval->add_option("--corpus", eval_args.corpus, "bracketed treebank file")->required();
  eval->add_option("--out", eval_args.out, "report file (default stdout)");
  eval->add_option("--layers", eval_args.layers, "maximum cascade depth");
  eval->add_option("--theta", eval_args.theta, "ambiguity threshold (>= 1)");
  eval->add_option("--beta", eval_args.beta, "f-score weight");
  eval->add_flag("--unlabeled", eval_args.unlabeled, "ignore categories when matching");
  eval->add_option("--seed", eval_args.seed, "split seed");
  eval->add_option("--repetitions", eval_args.repetitions, "number of splits");
  eval->add_option("--open-class-threshold", eval_args.open_class_threshold,
                   "distinct words above which a tag may emit unknowns");

  InspectArgs inspect_args;
  CLI::App* inspect =
      app.add_subcommand("inspect-lattice", "dump per-layer hypothesis lattices");
  inspect->configurable();
  inspect->add_option("--model", inspect_args.model, "model file")->required();
  inspect->add_option("--sentence", inspect_args.sentence, "tokenized sentence")
      ->required();
  inspect->add_option("--theta", inspect_args.theta, "ambiguity threshold (>= 1)");
  inspect->add_option("--layers", inspect_args.layers, "cascade depth override");
  inspect->add_flag("--accumulators", inspect_args.accumulators,
                    "also dump decoder accumulators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    int code = app.exit(error);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_args);
    if (parse->parsed()) return cmd_parse(parse_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (inspect->parsed()) return cmd_inspect(inspect_args);
  } catch (const cmm::ConfigError& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
