#include "cmm/model.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmm/errors.h"
#include "cmm/treebank.h"

namespace cmm {

ModelBundle train(const std::vector<SyntaxTree>& trees, const TrainConfig& config) {
  if (trees.empty()) throw DataError("training corpus is empty");
  if (config.max_layer < 1) throw ConfigError("max_layer must be >= 1");

  RuleCounts rule_counts;
  for (const SyntaxTree& tree : trees) rule_counts.add_tree(tree);

  ModelBundle bundle;
  bundle.max_layer = config.max_layer;
  auto symbols = std::make_shared<SymbolTable>();
  bundle.scfg = Scfg::estimate(rule_counts, config.scfg, symbols);

  std::vector<NgramCounts> layer_counts(config.max_layer + 1);
  for (const SyntaxTree& tree : trees) {
    bundle.stats.sentences += 1;
    bundle.stats.tokens += yield_size(tree);
    for (const LayerSequence& seq : layer_sequences(tree, config.max_layer)) {
      std::vector<Category> ids;
      ids.reserve(seq.symbols.size());
      for (const std::string& symbol : seq.symbols) {
        // Every sequence symbol is a rule lhs or a tag, interned above.
        ids.push_back(*symbols->find(symbol));
      }
      layer_counts[seq.layer].add_sequence(ids);
    }
  }

  bundle.context_models.reserve(layer_counts.size());
  for (int layer = 0; layer <= config.max_layer; ++layer) {
    bundle.context_models.push_back(
        ContextModel::estimate(layer, layer_counts[layer], config.context));
  }
  return bundle;
}

namespace {

constexpr const char* kHeader = "CMM-MODEL v1";

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // never print -0
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12f", value);
  return buffer;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string checksum_hex(const std::string& data) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(fnv1a(data)));
  return buffer;
}

void append_sorted(std::string* out, std::vector<std::string> lines) {
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) {
    out->append(line);
    out->push_back('\n');
  }
}

}  // namespace

void save_model(const ModelBundle& bundle, std::ostream& out) {
  const SymbolTable& symbols = *bundle.symbols();
  std::string text;
  text.append(kHeader);
  text.push_back('\n');
  text.append("META\tmax_layer\t" + std::to_string(bundle.max_layer) + "\n");
  text.append("META\tsentences\t" + std::to_string(bundle.stats.sentences) + "\n");
  text.append("META\ttokens\t" + std::to_string(bundle.stats.tokens) + "\n");

  text.append("LEXICON\n");
  {
    std::vector<std::string> lines;
    for (const auto& [tag, words] : bundle.scfg.lexicon()) {
      for (const auto& [word, log_prob] : words) {
        lines.push_back("LEX\t" + symbols.name(tag) + "\t" + word + "\t" +
                        format_number(log_prob));
      }
    }
    for (const auto& [tag, log_mass] : bundle.scfg.unknown_log_mass_by_tag()) {
      lines.push_back("UNK\t" + symbols.name(tag) + "\t" + format_number(log_mass));
    }
    append_sorted(&text, std::move(lines));
  }

  text.append("RULES\n");
  {
    std::vector<std::string> lines;
    for (const PhraseRule& rule : bundle.scfg.rules()) {
      std::string rhs;
      for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
        if (i > 0) rhs.push_back(' ');
        rhs.append(symbols.name(rule.rhs[i]));
      }
      lines.push_back("RULE\t" + symbols.name(rule.lhs) + "\t" + rhs + "\t" +
                      format_number(rule.log_prob));
    }
    append_sorted(&text, std::move(lines));
  }

  for (const ContextModel& model : bundle.context_models) {
    std::string layer = std::to_string(model.layer());
    text.append("NGRAM layer=" + layer +
                " order=1 events=" + std::to_string(model.total_events()) + "\n");
    {
      std::vector<std::string> lines;
      for (const auto& [event, log_prob] : model.unigram_table()) {
        lines.push_back(symbols.name(event) + "\t" + format_number(log_prob));
      }
      append_sorted(&text, std::move(lines));
    }
    text.append("NGRAM layer=" + layer + " order=2\n");
    {
      std::vector<std::string> lines;
      for (const auto& [key, log_prob] : model.bigram_table()) {
        lines.push_back(symbols.name(key.first) + "\t" + symbols.name(key.second) +
                        "\t" + format_number(log_prob));
      }
      append_sorted(&text, std::move(lines));
    }
    text.append("NGRAM layer=" + layer + " order=3\n");
    {
      std::vector<std::string> lines;
      for (const auto& [key, log_prob] : model.trigram_table()) {
        lines.push_back(symbols.name(std::get<0>(key)) + "\t" +
                        symbols.name(std::get<1>(key)) + "\t" +
                        symbols.name(std::get<2>(key)) + "\t" +
                        format_number(log_prob));
      }
      append_sorted(&text, std::move(lines));
    }
    text.append("LAMBDAS layer=" + layer + "\n");
    text.append(format_number(model.lambdas().unigram) + "\t" +
                format_number(model.lambdas().bigram) + "\t" +
                format_number(model.lambdas().trigram) + "\n");
  }

  text.append("END\n");
  out << text << "CHECKSUM\t" << checksum_hex(text) << "\n";
}

void save_model_file(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot open model file for writing: " + path);
  save_model(bundle, out);
}

namespace {

struct LoadState {
  std::shared_ptr<SymbolTable> symbols = std::make_shared<SymbolTable>();

  Category category(const std::string& name) {
    if (name == kBoundaryStartName) return kBoundaryStart;
    if (name == kBoundaryEndName) return kBoundaryEnd;
    return symbols->intern(name);
  }
};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    double value = std::stod(text, &used);
    if (used != text.size()) throw ModelError("malformed number: " + text);
    return value;
  } catch (const std::logic_error&) {
    throw ModelError("malformed number: " + text);
  }
}

std::uint64_t parse_integer(const std::string& text) {
  try {
    return std::stoull(text);
  } catch (const std::logic_error&) {
    throw ModelError("malformed integer: " + text);
  }
}

// "NGRAM layer=<k> order=<n>[ events=<N>]"
struct NgramHeader {
  int layer = 0;
  int order = 0;
  std::uint64_t events = 0;
};

NgramHeader parse_ngram_header(const std::string& line) {
  NgramHeader header;
  std::istringstream in(line);
  std::string keyword, field;
  in >> keyword;
  while (in >> field) {
    std::size_t eq = field.find('=');
    if (eq == std::string::npos) throw ModelError("malformed section header: " + line);
    std::string key = field.substr(0, eq);
    std::string value = field.substr(eq + 1);
    if (key == "layer") {
      header.layer = static_cast<int>(parse_integer(value));
    } else if (key == "order") {
      header.order = static_cast<int>(parse_integer(value));
    } else if (key == "events") {
      header.events = parse_integer(value);
    } else {
      throw ModelError("unknown header field: " + key);
    }
  }
  return header;
}

}  // namespace

ModelBundle load_model(std::istream& in) {
  std::string content(std::istreambuf_iterator<char>(in), {});
  std::size_t checksum_pos = content.rfind("CHECKSUM\t");
  if (checksum_pos == std::string::npos) {
    throw ModelError("model file is truncated: no checksum");
  }
  std::string body = content.substr(0, checksum_pos);
  std::string checksum_line = content.substr(checksum_pos);
  while (!checksum_line.empty() &&
         (checksum_line.back() == '\n' || checksum_line.back() == '\r')) {
    checksum_line.pop_back();
  }
  if (checksum_line.substr(9) != checksum_hex(body)) {
    throw ModelError("model file checksum mismatch");
  }

  std::istringstream lines(body);
  std::string line;
  if (!std::getline(lines, line)) throw ModelError("empty model file");
  if (line != kHeader) {
    if (line.rfind("CMM-MODEL", 0) == 0) {
      throw ModelError("unsupported model version: " + line);
    }
    throw ModelError("not a model file");
  }

  LoadState state;
  int max_layer = -1;
  CorpusStats stats;
  std::vector<PhraseRule> rules;
  std::vector<std::tuple<Category, std::string, double>> lexicon;
  std::vector<std::pair<Category, double>> unknown_mass;

  struct LayerData {
    std::uint64_t events = 0;
    InterpolationWeights lambdas;
    bool has_lambdas = false;
    std::vector<std::pair<Category, double>> unigrams;
    std::vector<std::tuple<Category, Category, double>> bigrams;
    std::vector<std::tuple<Category, Category, Category, double>> trigrams;
  };
  std::vector<LayerData> layers;
  auto layer_data = [&](int layer) -> LayerData& {
    if (layer < 0 || layer > 1000) throw ModelError("implausible layer index");
    if (static_cast<std::size_t>(layer) >= layers.size()) layers.resize(layer + 1);
    return layers[layer];
  };

  enum class Section { kNone, kLexicon, kRules, kNgram, kLambdas };
  Section section = Section::kNone;
  NgramHeader ngram;
  int lambda_layer = -1;
  bool saw_end = false;

  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    if (line == "END") {
      saw_end = true;
      continue;
    }
    if (line == "LEXICON") {
      section = Section::kLexicon;
      continue;
    }
    if (line == "RULES") {
      section = Section::kRules;
      continue;
    }
    if (line.rfind("NGRAM ", 0) == 0) {
      section = Section::kNgram;
      ngram = parse_ngram_header(line);
      if (ngram.order == 1) layer_data(ngram.layer).events = ngram.events;
      continue;
    }
    if (line.rfind("LAMBDAS layer=", 0) == 0) {
      section = Section::kLambdas;
      lambda_layer = static_cast<int>(parse_integer(line.substr(14)));
      continue;
    }

    std::vector<std::string> fields = split_tabs(line);
    switch (section) {
      case Section::kNone: {
        if (fields.size() == 3 && fields[0] == "META") {
          if (fields[1] == "max_layer") max_layer = static_cast<int>(parse_integer(fields[2]));
          if (fields[1] == "sentences") stats.sentences = parse_integer(fields[2]);
          if (fields[1] == "tokens") stats.tokens = parse_integer(fields[2]);
          break;
        }
        throw ModelError("unexpected line outside any section: " + line);
      }
      case Section::kLexicon: {
        if (fields.size() == 4 && fields[0] == "LEX") {
          lexicon.emplace_back(state.category(fields[1]), fields[2],
                               parse_number(fields[3]));
        } else if (fields.size() == 3 && fields[0] == "UNK") {
          unknown_mass.emplace_back(state.category(fields[1]), parse_number(fields[2]));
        } else {
          throw ModelError("malformed lexicon line: " + line);
        }
        break;
      }
      case Section::kRules: {
        if (fields.size() != 4 || fields[0] != "RULE") {
          throw ModelError("malformed rule line: " + line);
        }
        PhraseRule rule;
        rule.lhs = state.category(fields[1]);
        std::istringstream rhs(fields[2]);
        std::string symbol;
        while (rhs >> symbol) rule.rhs.push_back(state.category(symbol));
        rule.log_prob = parse_number(fields[3]);
        rules.push_back(std::move(rule));
        break;
      }
      case Section::kNgram: {
        LayerData& data = layer_data(ngram.layer);
        if (ngram.order == 1 && fields.size() == 2) {
          data.unigrams.emplace_back(state.category(fields[0]), parse_number(fields[1]));
        } else if (ngram.order == 2 && fields.size() == 3) {
          data.bigrams.emplace_back(state.category(fields[0]), state.category(fields[1]),
                                    parse_number(fields[2]));
        } else if (ngram.order == 3 && fields.size() == 4) {
          data.trigrams.emplace_back(state.category(fields[0]), state.category(fields[1]),
                                     state.category(fields[2]), parse_number(fields[3]));
        } else {
          throw ModelError("malformed n-gram line: " + line);
        }
        break;
      }
      case Section::kLambdas: {
        if (fields.size() != 3) throw ModelError("malformed lambda line: " + line);
        LayerData& data = layer_data(lambda_layer);
        data.lambdas.unigram = parse_number(fields[0]);
        data.lambdas.bigram = parse_number(fields[1]);
        data.lambdas.trigram = parse_number(fields[2]);
        data.has_lambdas = true;
        break;
      }
    }
  }

  if (!saw_end) throw ModelError("model file is truncated: no END marker");
  if (max_layer < 1) throw ModelError("model file lacks a max_layer entry");
  if (layers.size() != static_cast<std::size_t>(max_layer) + 1) {
    throw ModelError("model file has wrong number of layers");
  }

  ModelBundle bundle;
  bundle.max_layer = max_layer;
  bundle.stats = stats;
  bundle.scfg = Scfg::from_parameters(state.symbols, std::move(rules),
                                      std::move(lexicon), std::move(unknown_mass));
  for (int layer = 0; layer <= max_layer; ++layer) {
    LayerData& data = layers[layer];
    if (!data.has_lambdas) throw ModelError("missing lambdas for a layer");
    bundle.context_models.push_back(ContextModel::from_parameters(
        layer, data.lambdas, data.events, std::move(data.unigrams),
        std::move(data.bigrams), std::move(data.trigrams)));
  }
  return bundle;
}

ModelBundle load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file: " + path);
  return load_model(in);
}

}  // namespace cmm
