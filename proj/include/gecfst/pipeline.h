// Copyright 2026 The gecfst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end correction: configuration, per-sentence lattice construction,
// decoding, tuning and reporting.

#ifndef GECFST_PIPELINE_H_
#define GECFST_PIPELINE_H_

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gecfst/decoder.h"
#include "gecfst/lattice.h"
#include "gecfst/ngram.h"
#include "gecfst/subword.h"
#include "gecfst/tune_eval.h"

namespace gecfst {

enum class InputMode { kIdentity, kNBest };

struct ScorerSpec {
  std::string role;  // "nlm" or "nmt"; selects lambda_nlm / lambda_nmt
  std::string kind;  // "ngram" (ARPA file) or "replay" (score file)
  std::string path;
};

// Line-oriented "key = value" file; '#' starts a comment. Relative paths
// are resolved against the directory of the config file.
struct PipelineConfig {
  InputMode mode = InputMode::kIdentity;
  std::string confusions;  // empty: no edits
  std::string lm;          // ARPA; empty: flat language model
  std::string subwords;    // unit list; empty: decode words
  std::string nbest;       // required in nbest mode
  LambdaParams lambda;
  size_t beam = 12;
  std::vector<ScorerSpec> scorers;
  BackoffMode backoff = BackoffMode::kFailure;
  int threads = 0;  // 0: hardware concurrency

  // Tuning.
  int max_sweeps = 5;
  int restarts = 3;
  double lambda_min = 0.0;
  double lambda_max = 10.0;

  // ConfigError on unknown keys and bad values.
  static PipelineConfig Parse(std::istream &is, const std::string &base_dir = "");
  static PipelineConfig ReadFile(const std::string &path);
  void Write(std::ostream &os) const;
  void WriteFile(const std::string &path) const;

  // ConfigError unless lambdas are finite, beam >= 1, the sweep bounds make
  // sense and every referenced file exists.
  void Validate() const;
};

struct CorrectedSentence {
  Sentence words;
  bool fallback = false;  // decoding failed and the input was echoed
  std::string warning;
};

// Loaded resources. Immutable after construction, so one pipeline may serve
// several threads.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig &Config() const { return config_; }

  // Sentences with their lambda-independent lattices. Lattices carry
  // feature vectors so a new lambda only needs a reweight.
  class Batch {
   public:
    size_t Size() const { return items_.size(); }
    const Sentence &Source(size_t i) const { return items_[i].source; }

   private:
    friend class Pipeline;
    struct Item {
      Sentence source;
      std::optional<Wfst> hword;     // feature-annotated word lattice
      std::optional<Wfst> expanded;  // the same over subword units
      std::string error;
    };
    std::vector<Item> items_;
  };

  // The n-best file, in nbest mode, must list entries for exactly these
  // sentences in order.
  Batch Prepare(const std::vector<Sentence> &sources) const;

  std::vector<CorrectedSentence> Decode(const Batch &batch, const LambdaParams &lambda) const;
  std::vector<CorrectedSentence> Correct(const std::vector<Sentence> &sources) const;

  // Word lattice for oracle checks, weighted with the configured lambdas.
  // A sentence whose lattice could not be built gets its input sentence.
  Wfst WordLattice(const Batch &batch, size_t i) const;

  // Lambda indices (see kLambdaNames) that influence this system.
  std::vector<size_t> TunableLambdas() const;

 private:
  CorrectedSentence DecodeOne(const Batch::Item &item, const LambdaParams &lambda) const;

  PipelineConfig config_;
  std::shared_ptr<SymbolTable> base_symbols_;
  ConfusionTable confusions_;
  std::shared_ptr<const NGramModel> lm_;
  std::optional<Wfst> lm_fst_;
  std::optional<SubwordVocab> subwords_;
  std::vector<std::pair<std::string, std::shared_ptr<const Scorer>>> scorers_;
};

enum class Metric { kGleu, kF05 };
// "gleu" or "f05"; ConfigError otherwise.
Metric ParseMetric(const std::string &name);

// Corpus from parallel files. `references` may name several files, one
// reference set each; `gold` may be empty.
EvalCorpus LoadEvalCorpus(const std::string &sources, const std::vector<std::string> &references,
                          const std::string &gold);

double Score(Metric metric, const EvalCorpus &corpus, const std::vector<Sentence> &hyps);

struct TuneOutcome {
  LambdaParams lambda;
  double initial = 0.0;
  double best = 0.0;
  std::string report;  // per-sweep table
};

// Powell search over the tunable lambdas, reusing the prepared lattices for
// every evaluation. `max_sweeps` < 0 keeps the configured value.
TuneOutcome Tune(const Pipeline &pipeline, const EvalCorpus &dev, Metric metric,
                 int max_sweeps = -1);

// Rows "source" (the uncorrected input) and "system", with GLEU, edit
// precision/recall/F0.5 and oracle error rate. P/R/F0.5 are "-" without
// gold edits.
std::string Report(const Pipeline &pipeline, const EvalCorpus &test);

}  // namespace gecfst

#endif  // GECFST_PIPELINE_H_
