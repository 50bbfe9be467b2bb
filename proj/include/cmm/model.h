#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cmm/context_model.h"
#include "cmm/scfg.h"
#include "cmm/tree.h"

namespace cmm {

struct TrainConfig {
  int max_layer = 9;
  ScfgConfig scfg;
  ContextModelConfig context;  // applied to every layer
};

struct CorpusStats {
  std::uint64_t sentences = 0;
  std::uint64_t tokens = 0;
};

// Everything the cascade needs: the shared SCFG plus one context model per
// layer 0..max_layer. Immutable once trained or loaded; decoders of any
// number of sentences may share one bundle.
struct ModelBundle {
  Scfg scfg;
  std::vector<ContextModel> context_models;
  int max_layer = 0;
  CorpusStats stats;

  const ContextModel& layer_model(int layer) const { return context_models.at(layer); }
  const std::shared_ptr<const SymbolTable>& symbols() const { return scfg.symbols(); }
};

ModelBundle train(const std::vector<SyntaxTree>& trees, const TrainConfig& config);

// Line-oriented text format, canonically sorted so identical parameters
// serialize to identical bytes. Log probabilities are written with 12
// decimal places; the trailing checksum guards against truncation.
void save_model(const ModelBundle& bundle, std::ostream& out);
void save_model_file(const ModelBundle& bundle, const std::string& path);
ModelBundle load_model(std::istream& in);
ModelBundle load_model_file(const std::string& path);

}  // namespace cmm
