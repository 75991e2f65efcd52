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

// Toy correction data shared by the lattice, decoder and end-to-end tests.

#ifndef GECFST_TESTS_FIXTURES_H_
#define GECFST_TESTS_FIXTURES_H_

#include <sstream>
#include <string>
#include <vector>

#include "gecfst/fst_ops.h"
#include "gecfst/lattice.h"
#include "gecfst/ngram.h"

namespace gecfst::testing {

inline std::vector<std::string> Split(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string Join(const std::vector<std::string> &v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

inline const std::string kRunningExample = "In a such situaction there is no other way .";

inline std::vector<std::vector<std::string>> ToyLmCorpus() {
  return {Split("In such a situation there is no other way ."),
          Split("In this situation there is no other way ."),
          Split("there is no other way ."),
          Split("a situation like this is rare ."),
          Split("In a such situation there is no other way ."),
          Split("the acquisition was announced ."),
          Split("there is a way .")};
}

inline ConfusionTable RunningConfusions() {
  ConfusionTable t;
  t.Add("situaction", "situation");
  t.Add("situaction", "acquisition");
  return t;
}

// Accepts every string at weight 0.
inline Wfst UniformLm(const SymbolTablePtr &symbols) {
  Wfst l(symbols);
  l.SetStart(l.AddState());
  l.SetFinal(0, Weight::One());
  l.AddArc(0, {kSigma, kSigma, Weight::One(), 0});
  return l;
}

inline std::vector<std::string> StripCorrections(const std::vector<std::string> &tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) {
    if (t != kCorrSymbol && t != kMcorrSymbol) out.push_back(t);
  }
  return out;
}

inline std::vector<std::string> Tokens(const Wfst &f, const std::vector<Label> &labels) {
  return LabelsToTokens(f, labels);
}

// Every sentence reachable by substituting at most one candidate per
// position, with the number of substitutions made.
inline std::vector<std::pair<std::vector<std::string>, int>> CandidateSentences(
    const std::vector<std::string> &x, const ConfusionTable &table) {
  std::vector<std::pair<std::vector<std::string>, int>> out{{{}, 0}};
  for (const auto &w : x) {
    std::vector<std::pair<std::vector<std::string>, int>> next;
    for (const auto &[prefix, n] : out) {
      auto keep = prefix;
      keep.push_back(w);
      next.emplace_back(std::move(keep), n);
      for (const auto &c : table.Candidates(w)) {
        auto sub = prefix;
        sub.push_back(c);
        next.emplace_back(std::move(sub), n + 1);
      }
    }
    out = std::move(next);
  }
  return out;
}

// The word-lattice objective for one candidate of an identity input.
inline double Objective(const std::vector<std::string> &y, int corrections,
                        const LambdaParams &lambda, const NGramModel &lm) {
  return lambda.corr * corrections + lambda.wc * static_cast<double>(y.size()) -
         lambda.kenlm * lm.SentenceLogProb(y);
}

}  // namespace gecfst::testing

#endif  // GECFST_TESTS_FIXTURES_H_
