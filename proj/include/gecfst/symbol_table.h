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

#ifndef GECFST_SYMBOL_TABLE_H_
#define GECFST_SYMBOL_TABLE_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gecfst {

using Label = int32_t;

inline constexpr Label kNoLabel = -1;
inline constexpr Label kEpsilon = 0;
inline constexpr Label kSigma = 1;  // matches any single symbol
inline constexpr Label kPhi = 2;    // matches the symbols with no explicit arc
inline constexpr Label kCorr = 3;
inline constexpr Label kMcorr = 4;
inline constexpr Label kUnk = 5;
inline constexpr Label kFirstUserLabel = 6;

inline constexpr const char *kEpsilonSymbol = "<eps>";
inline constexpr const char *kSigmaSymbol = "<sigma>";
inline constexpr const char *kPhiSymbol = "<phi>";
inline constexpr const char *kCorrSymbol = "<corr>";
inline constexpr const char *kMcorrSymbol = "<mcorr>";
inline constexpr const char *kUnkSymbol = "<unk>";

// True for the matcher labels that never denote a concrete symbol.
inline constexpr bool IsSpecialLabel(Label l) {
  return l == kEpsilon || l == kSigma || l == kPhi;
}

inline constexpr bool IsCorrectionLabel(Label l) { return l == kCorr || l == kMcorr; }

// Bijective map between symbol text and dense non-negative ids. Ids 0-5 are
// reserved (see the k* label constants); user symbols are appended from 6.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the id of `symbol`, adding it if absent.
  Label AddSymbol(std::string_view symbol);

  // kNoLabel when absent.
  Label Find(std::string_view symbol) const;
  // Empty string when out of range.
  const std::string &Find(Label id) const;

  bool Contains(std::string_view symbol) const { return Find(symbol) != kNoLabel; }
  size_t Size() const { return symbols_.size(); }

  // True when one table is a prefix of the other: every id the smaller table
  // defines maps to the same text in the larger one. Per-sentence tables are
  // extensions of a shared base table, so this is the composition check.
  static bool Compatible(const SymbolTable *a, const SymbolTable *b);

  // "symbol id" per line.
  static std::shared_ptr<SymbolTable> ReadText(std::istream &is);
  static std::shared_ptr<SymbolTable> ReadTextFile(const std::string &path);
  void WriteText(std::ostream &os) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label> ids_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

// Larger of two compatible tables; `a` when they are not compatible.
SymbolTablePtr WiderSymbols(const SymbolTablePtr &a, const SymbolTablePtr &b);

}  // namespace gecfst

#endif  // GECFST_SYMBOL_TABLE_H_
