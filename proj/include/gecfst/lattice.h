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

// Hypothesis-space construction for correction:
//
//   I      input lattice (the sentence itself, or an n-best list with
//          <mcorr> tokens counting each entry's distance to the source)
//   E      edit transducer, word -> <corr> candidate
//   P      penalizer for <corr>, <mcorr> and every ordinary word
//   L      n-gram acceptor (see ngram.h)
//   B      = output projection of I o E
//   Hword  = B o P o L
//   Hbpe   = optimized output projection of Hword o T (see subword.h)
//
// Every weighted machine built here also carries a feature vector (layout
// below) so that a lattice can be reweighted for new lambdas without being
// rebuilt.

#ifndef GECFST_LATTICE_H_
#define GECFST_LATTICE_H_

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gecfst/wfst.h"

namespace gecfst {

enum Feature : int {
  kFeatSmt = 0,  // -SMT(y|x)
  kFeatCorr,     // number of <corr> tokens
  kFeatMcorr,    // number of <mcorr> tokens
  kFeatLm,       // -log P(words)
  kFeatWc,       // number of ordinary words
  kNumFeatures,
};

struct LambdaParams {
  double smt = 1.0;
  double corr = 1.0;
  double mcorr = 1.0;
  double kenlm = 1.0;
  double nlm = 0.0;
  double nmt = 0.0;
  double wc = 1.0;

  // Scales for Reweight(), indexed by Feature.
  std::array<double, kNumFeatures> FeatureScales() const { return {smt, corr, mcorr, kenlm, wc}; }
  bool AllFinite() const;

  friend bool operator==(const LambdaParams &, const LambdaParams &) = default;
};

// Names used in config files and reports, in declaration order.
inline constexpr std::array<const char *, 7> kLambdaNames{
    "lambda_smt", "lambda_corr", "lambda_mcorr", "lambda_kenlm",
    "lambda_nlm", "lambda_nmt",  "lambda_wc"};
double &LambdaRef(LambdaParams &p, size_t i);
double LambdaGet(const LambdaParams &p, size_t i);

template <typename T>
size_t Levenshtein(std::span<const T> x, std::span<const T> y) {
  std::vector<size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}
inline size_t Levenshtein(const std::vector<std::string> &x, const std::vector<std::string> &y) {
  return Levenshtein<std::string>(x, y);
}

// word -> sorted candidate set; a word never maps to itself.
class ConfusionTable {
 public:
  void Add(const std::string &word, const std::string &candidate);
  // Empty when the word has no candidates.
  const std::set<std::string> &Candidates(const std::string &word) const;
  const std::map<std::string, std::set<std::string>> &Entries() const { return table_; }
  bool Empty() const { return table_.empty(); }
  void Merge(const ConfusionTable &other);

  // "word<TAB>cand1,cand2,..." per line.
  static ConfusionTable Read(std::istream &is);
  static ConfusionTable ReadFile(const std::string &path);
  void Write(std::ostream &os) const;

  // Built-in stand-in for spelling resources: every dictionary word within
  // `max_distance` character edits of a word in `words`, plus all other
  // members of each closed class a word belongs to.
  static ConfusionTable Generate(const std::vector<std::string> &words,
                                 const std::vector<std::string> &dictionary, int max_distance,
                                 const std::vector<std::vector<std::string>> &closed_classes = {});

 private:
  std::map<std::string, std::set<std::string>> table_;
};

struct NBestEntry {
  std::vector<std::string> tokens;
  double score = 0.0;  // SMT log-probability
};

struct NBestList {
  std::vector<std::string> source;
  std::vector<NBestEntry> entries;
};

// Keeps the highest score among duplicate hypotheses and appends the source
// (with the lowest score in the list, or 0 for an empty list) when absent.
void NormalizeNBest(NBestList &list);

// Moses format "id ||| tokens ||| features ||| score". Returns one entry
// list per sentence id in [0, num_sentences); ids outside are an error.
std::vector<std::vector<NBestEntry>> ReadNBest(std::istream &is, size_t num_sentences);
std::vector<std::vector<NBestEntry>> ReadNBestFile(const std::string &path, size_t num_sentences);

// Fresh per-sentence table extending `base`.
std::shared_ptr<SymbolTable> SentenceSymbols(const SymbolTablePtr &base);

// Linear identity acceptor of x at weight 0.
Wfst BuildInputIdentity(const std::vector<std::string> &x,
                        const std::shared_ptr<SymbolTable> &symbols);

// Prefix-tree acceptor of <mcorr>^lev(x,y) y for every entry, weight
// -lambda_smt * score on the final state. The list is normalized first.
Wfst BuildInputNBest(NBestList list, double lambda_smt,
                     const std::shared_ptr<SymbolTable> &symbols);

// One state with a sigma loop, and for each in-scope word w with candidates
// the path w:<corr> then eps:y for each candidate y.
Wfst BuildEditTransducer(std::span<const Label> words_in_scope, const ConfusionTable &table,
                         const std::shared_ptr<SymbolTable> &symbols);

// One state: <corr> at lambda.corr, <mcorr> at lambda.mcorr, and a rest-mode
// phi loop at lambda.wc for every other symbol.
Wfst BuildPenalizer(const LambdaParams &lambda, const SymbolTablePtr &symbols);

// Distinct concrete output labels of f.
std::vector<Label> OutputAlphabet(const Wfst &f);

// Output projection of I o E.
Wfst AssembleBase(const Wfst &input, const Wfst &edit);
// B o P o L for B = AssembleBase(input, edit). Every intermediate result is
// checked to be acyclic (std::logic_error otherwise); an empty result is a
// DecodeError.
Wfst AssembleHword(const Wfst &input, const Wfst &edit, const Wfst &penalizer, const Wfst &lm);
// The same starting from B.
Wfst ScoreBase(const Wfst &base, const Wfst &penalizer, const Wfst &lm);

// Output projection of Hword o T, without optimization.
Wfst ExpandSubwords(const Wfst &hword, const Wfst &t);
// ExpandSubwords followed by the full optimization cascade.
Wfst AssembleHbpe(const Wfst &hword, const Wfst &t);

// Deletes <corr>/<mcorr>, passes everything else through.
Wfst BuildCorrectionEraser(const SymbolTablePtr &symbols);

// True when some path of h spells `reference` once correction tokens are
// erased.
bool OracleContains(const Wfst &h, const std::vector<std::string> &reference);

}  // namespace gecfst

#endif  // GECFST_LATTICE_H_
