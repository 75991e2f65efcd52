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

// Corpus metrics (GLEU, edit-level F0.5, oracle error rate) and a bounded
// Powell search for tuning the lambdas.

#ifndef GECFST_TUNE_EVAL_H_
#define GECFST_TUNE_EVAL_H_

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gecfst/lattice.h"
#include "gecfst/wfst.h"

namespace gecfst {

using Sentence = std::vector<std::string>;

// Source span [start, end) replaced by `replacement`.
struct Edit {
  size_t start = 0;
  size_t end = 0;
  Sentence replacement;

  friend bool operator==(const Edit &, const Edit &) = default;
  friend auto operator<=>(const Edit &, const Edit &) = default;
};

struct EvalCorpus {
  std::vector<Sentence> sources;
  std::vector<std::vector<Sentence>> references;  // at least one per source
  std::vector<std::vector<Edit>> gold_edits;      // empty, or one list per source

  // ConfigError unless lengths agree and every edit lies inside its source
  // without overlapping another edit.
  void Validate() const;
};

// Whitespace-tokenized, one sentence per line.
std::vector<Sentence> ReadSentences(std::istream &is);
std::vector<Sentence> ReadSentencesFile(const std::string &path);

// "sent_id<TAB>start<TAB>end<TAB>replacement" per edit.
std::vector<std::vector<Edit>> ReadGoldEdits(std::istream &is, size_t num_sentences);
std::vector<std::vector<Edit>> ReadGoldEditsFile(const std::string &path, size_t num_sentences);

// Corpus GLEU against one reference per sentence. Per order n the counts
// are summed over the corpus:
//   m_n = clipped hypothesis/reference matches
//   d_n = clipped hypothesis/source matches beyond the reference count
//   p_n = max(0, m_n - d_n) / h_n
// and the score is BP * exp(mean log p_n) with BP = min(1, exp(1 - r/h)).
// Orders with no hypothesis n-grams are left out of the mean; the score is
// 0 when every order is left out or some p_n is 0.
double Gleu(std::span<const Sentence> hyps, std::span<const Sentence> sources,
            std::span<const Sentence> refs, int max_n = 4);

// Edits turning `source` into `hyp`, from a token Levenshtein alignment
// (ties prefer match/substitution, then deletion, then insertion) with
// adjacent non-matching operations merged into one span.
std::vector<Edit> ExtractEdits(const Sentence &source, const Sentence &hyp);

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f05 = 0.0;
};

// Corpus-level exact-match edit scoring. P = 1 when nothing is proposed,
// R = 1 when there are no gold edits, F = 0 when P + R = 0.
PRF EditF05(std::span<const Sentence> hyps, std::span<const Sentence> sources,
            std::span<const std::vector<Edit>> gold);
PRF PrfFromCounts(size_t matched, size_t proposed, size_t gold);

// Fraction of references not contained in their sentence's lattice;
// `build(i)` returns the lattice for sentence i.
double OracleErrorRate(const EvalCorpus &corpus, const std::function<Wfst(size_t)> &build);

struct PowellOptions {
  std::vector<double> lower;  // per coordinate; lower == upper freezes it
  std::vector<double> upper;
  int max_sweeps = 5;
  int restarts = 3;  // the first run starts at `init`, later ones at random points
  int grid = 8;      // coarse scan points per line search
  double tolerance = 1e-6;
  unsigned seed = 1;
};

struct PowellStep {
  int restart = 0;
  int sweep = 0;
  double value = 0.0;  // best value seen so far
  std::vector<double> point;
};

struct PowellResult {
  std::vector<double> point;
  double value = 0.0;
  int evaluations = 0;
  std::vector<PowellStep> history;
};

// Maximizes `objective` inside the box with Powell's direction-set method.
// Line searches scan a coarse grid and refine the best cell by golden
// section, and only ever move to a strictly better point, so the result is
// never worse than `init`. max_sweeps = 0 returns `init`.
PowellResult PowellMaximize(const std::function<double(std::span<const double>)> &objective,
                            std::vector<double> init, const PowellOptions &opts);

// The same over LambdaParams; `free` lists the lambda indices (see
// kLambdaNames) to tune within [lower, upper], the rest stay at `init`.
struct LambdaTuneResult {
  LambdaParams best;
  double value = 0.0;
  PowellResult search;
};
LambdaTuneResult PowellTune(const std::function<double(const LambdaParams &)> &objective,
                            const LambdaParams &init, std::span<const size_t> free, double lower,
                            double upper, const PowellOptions &opts);

}  // namespace gecfst

#endif  // GECFST_TUNE_EVAL_H_
