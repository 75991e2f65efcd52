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

// Word to subword segmentation by greedy longest match over a unit
// vocabulary. Non-final pieces carry the "@@" continuation marker. With
// character fallback every UTF-8 character is implicitly a unit in both
// forms, so segmentation is total.

#ifndef GECFST_SUBWORD_H_
#define GECFST_SUBWORD_H_

#include <iosfwd>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gecfst/wfst.h"

namespace gecfst {

inline constexpr std::string_view kContinuation = "@@";

class SubwordVocab {
 public:
  SubwordVocab() = default;
  explicit SubwordVocab(std::set<std::string> units, bool char_fallback = true)
      : units_(std::move(units)), char_fallback_(char_fallback) {}

  // One unit per line; blank lines are skipped.
  static SubwordVocab Read(std::istream &is, bool char_fallback = true);
  static SubwordVocab ReadFile(const std::string &path, bool char_fallback = true);
  // BPE merges, "left right" per line with "</w>" marking word ends. Every
  // merge result becomes a unit: final when it ends a word, continuation
  // otherwise. A "#version" header line is ignored.
  static SubwordVocab FromMerges(std::istream &is, bool char_fallback = true);

  bool Contains(const std::string &unit) const { return units_.contains(unit); }
  const std::set<std::string> &Units() const { return units_; }
  bool CharFallback() const { return char_fallback_; }

 private:
  std::set<std::string> units_;
  bool char_fallback_ = true;
};

// Pieces of `word`, leftmost longest match first. Correction tokens and the
// other reserved symbols are returned unchanged. ConfigError when a
// position has no matching unit and character fallback is off.
std::vector<std::string> SegmentWord(const SubwordVocab &vocab, const std::string &word);

// Joins continuation-marked pieces. FormatError on a trailing marker.
std::vector<std::string> Desegment(std::span<const std::string> pieces);

// One looping state; every word label maps to the chain of its pieces and
// correction tokens map to themselves. Pieces are added to `symbols`, which
// becomes both tables of the result.
Wfst BuildSubwordTransducer(std::span<const Label> words, const SubwordVocab &vocab,
                            const std::shared_ptr<SymbolTable> &symbols);

}  // namespace gecfst

#endif  // GECFST_SUBWORD_H_
