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

// Backoff n-gram language model and its compilation to a weighted acceptor.
//
// Training uses interpolated absolute discounting with one discount D:
//
//   P(w|h) = max(c(h,w) - D, 0) / c(h) + gamma(h) * P(w|h')
//   gamma(h) = D * |{w : c(h,w) > 0}| / c(h)
//
// where h' drops the oldest word of h. The unigram level gives <unk> the
// relative frequency of singleton word types (floored at 1e-7) and scales
// the rest by the remaining mass. Seen n-grams are stored with their
// interpolated probability and gamma(h) is the backoff weight, so the usual
// backoff evaluation reproduces the interpolated estimate exactly.
//
// All log-probabilities are natural logs; ARPA files hold log10.

#ifndef GECFST_NGRAM_H_
#define GECFST_NGRAM_H_

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gecfst/wfst.h"

namespace gecfst {

inline constexpr const char *kBosSymbol = "<s>";
inline constexpr const char *kEosSymbol = "</s>";

class NGramModel {
 public:
  using WordId = int32_t;
  static constexpr WordId kBos = 0;
  static constexpr WordId kEos = 1;
  static constexpr WordId kUnkWord = 2;

  // ConfigError for an empty corpus, order < 1 or a discount outside (0,1).
  static NGramModel Train(const std::vector<std::vector<std::string>> &corpus, int order,
                          double discount);

  static NGramModel ReadArpa(std::istream &is);
  static NGramModel ReadArpaFile(const std::string &path);
  void WriteArpa(std::ostream &os) const;

  int Order() const { return order_; }

  // Every word the model knows, <s>, </s> and <unk> first.
  const std::vector<std::string> &Vocab() const { return words_; }
  // kUnkWord for unknown words.
  WordId Id(const std::string &word) const;

  // log P(word | history). The history is oldest first and may be longer
  // than the model order.
  double LogProb(std::span<const WordId> history, WordId word) const;
  double LogProb(const std::vector<std::string> &history, const std::string &word) const;

  // Sum over the sentence and </s>, starting from <s>.
  double SentenceLogProb(const std::vector<std::string> &sentence) const;
  // Same without the </s> factor.
  double PrefixLogProb(const std::vector<std::string> &sentence) const;

  // Stored entries, for compilation and inspection. Keys are the full n-gram
  // (history then word) for probabilities and the history for backoffs.
  const std::map<std::vector<WordId>, double> &Probs() const { return probs_; }
  const std::map<std::vector<WordId>, double> &Backoffs() const { return backoffs_; }
  double Backoff(const std::vector<WordId> &history) const;

 private:
  NGramModel();
  WordId Intern(const std::string &word);

  int order_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::map<std::vector<WordId>, double> probs_;
  std::map<std::vector<WordId>, double> backoffs_;
};

enum class BackoffMode {
  kFailure,  // exact: phi arcs with failure semantics
  kEpsilon,  // epsilon arcs; may find cheaper non-backoff-consistent paths
};

struct LmFstOptions {
  BackoffMode backoff = BackoffMode::kFailure;
  // Labels accepted with zero cost at every state.
  std::vector<Label> transparent{kCorr, kMcorr};
  // When num_features > 0 every weight also goes into slot `feature_index`
  // unscaled (-log P), so the machine can be reweighted later.
  int num_features = 0;
  int feature_index = -1;
};

// Acceptor with one state per stored history. The start state is the <s>
// history; final weights are the end-of-sentence costs. Words are added to
// `symbols` when missing, and the result uses that table. For every y,
// StringWeight(L, y) = -lambda * SentenceLogProb(y without transparent
// labels) in failure mode.
Wfst LmToFst(const NGramModel &model, double lambda, const std::shared_ptr<SymbolTable> &symbols,
             const LmFstOptions &opts = {});

}  // namespace gecfst

#endif  // GECFST_NGRAM_H_
