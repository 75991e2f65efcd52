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

// Decoding over a hypothesis lattice: exact shortest path, or beam search
// that adds external sequence scorers to the lattice cost,
//
//   score(y) = -cost_H(y) + sum_i lambda_i * log P_i(y).

#ifndef GECFST_DECODER_H_
#define GECFST_DECODER_H_

#include <any>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gecfst/ngram.h"
#include "gecfst/wfst.h"

namespace gecfst {

// Left-to-right token scorer. Implementations are immutable; per-hypothesis
// state lives in the opaque value returned by Init/Extend.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string Name() const = 0;
  virtual std::any Init() const = 0;
  // Returns the successor state and log P(token | state).
  virtual std::pair<std::any, double> Extend(const std::any &state,
                                             const std::string &token) const = 0;
  // log P(end | state).
  virtual double Finish(const std::any &state) const = 0;
};

// 0 everywhere.
class UniformScorer : public Scorer {
 public:
  std::string Name() const override { return "uniform"; }
  std::any Init() const override { return {}; }
  std::pair<std::any, double> Extend(const std::any &state, const std::string &) const override {
    return {state, 0.0};
  }
  double Finish(const std::any &) const override { return 0.0; }
};

// An n-gram model over whatever tokens the lattice carries.
class NGramScorer : public Scorer {
 public:
  explicit NGramScorer(std::shared_ptr<const NGramModel> model, std::string name = "ngram")
      : model_(std::move(model)), name_(std::move(name)) {}
  std::string Name() const override { return name_; }
  std::any Init() const override;
  std::pair<std::any, double> Extend(const std::any &state,
                                     const std::string &token) const override;
  double Finish(const std::any &state) const override;

 private:
  std::shared_ptr<const NGramModel> model_;
  std::string name_;
};

// Replays fixed scores: "prefix tokens ||| logprob" per line, where the
// prefix ends with the scored token, or with </s> for the end score.
// Prefixes not in the file score `missing`.
class ReplayScorer : public Scorer {
 public:
  explicit ReplayScorer(std::map<std::string, double> scores, double missing = 0.0,
                        std::string name = "replay")
      : scores_(std::move(scores)), missing_(missing), name_(std::move(name)) {}
  static ReplayScorer Read(std::istream &is, double missing = 0.0);
  static ReplayScorer ReadFile(const std::string &path, double missing = 0.0);

  std::string Name() const override { return name_; }
  std::any Init() const override { return std::string(); }
  std::pair<std::any, double> Extend(const std::any &state,
                                     const std::string &token) const override;
  double Finish(const std::any &state) const override;

 private:
  double Lookup(const std::string &key) const;

  std::map<std::string, double> scores_;
  double missing_;
  std::string name_;
};

struct WeightedScorer {
  std::shared_ptr<const Scorer> scorer;
  double lambda = 1.0;
};

struct BeamOptions {
  size_t beam = 12;
  // Per-step beam tables are written here when set.
  std::ostream *trace = nullptr;
  // Upper bound on expansion steps; 0 means the number of states, which is
  // enough for an acyclic lattice.
  size_t max_steps = 0;
};

struct DecodeResult {
  std::vector<std::string> words;   // correction tokens stripped, desegmented
  std::vector<std::string> tokens;  // raw lattice tokens
  double fst_cost = 0.0;
  std::vector<double> scorer_logprobs;  // unscaled, one per scorer
  double score = 0.0;                   // combined score (higher is better)
};

// Time-synchronous beam search constrained to h: a hypothesis may only
// extend with tokens on arcs leaving its state, and completes at final
// states. All expansions of one step compete for `beam` slots (global top-k,
// ties by lexicographic token ids). Correction tokens are not shown to the
// scorers. ConfigError for beam = 0, DecodeError when nothing completes.
DecodeResult BeamDecode(const Wfst &h, std::span<const WeightedScorer> scorers,
                        const BeamOptions &opts = {});

// Shortest path of a word lattice. DecodeError for an empty language.
DecodeResult ExactDecode(const Wfst &hword);

}  // namespace gecfst

#endif  // GECFST_DECODER_H_
