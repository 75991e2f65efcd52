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

#include "gecfst/subword.h"

#include <fstream>
#include <sstream>

#include "gecfst/error.h"

namespace gecfst {

namespace {

// Byte offsets of UTF-8 character starts, plus the end. Malformed bytes are
// treated as one-byte characters.
std::vector<size_t> CharBoundaries(const std::string &s) {
  std::vector<size_t> b;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) b.push_back(i);
  }
  b.push_back(s.size());
  if (b.front() != 0) b.insert(b.begin(), 0);
  return b;
}

bool IsReserved(const std::string &w) {
  for (const char *r : {kEpsilonSymbol, kSigmaSymbol, kPhiSymbol, kCorrSymbol, kMcorrSymbol,
                        kUnkSymbol}) {
    if (w == r) return true;
  }
  return false;
}

bool EndsWithMarker(const std::string &p) {
  return p.size() > kContinuation.size() && p.ends_with(kContinuation);
}

}  // namespace

SubwordVocab SubwordVocab::Read(std::istream &is, bool char_fallback) {
  std::set<std::string> units;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream in(line);
    std::string unit;
    if (in >> unit) units.insert(unit);
  }
  return SubwordVocab(std::move(units), char_fallback);
}

SubwordVocab SubwordVocab::ReadFile(const std::string &path, bool char_fallback) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Read(in, char_fallback);
}

SubwordVocab SubwordVocab::FromMerges(std::istream &is, bool char_fallback) {
  constexpr std::string_view kEow = "</w>";
  std::set<std::string> units;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.rfind("#version", 0) == 0) continue;
    std::istringstream in(line);
    std::string left, right, extra;
    if (!(in >> left)) continue;
    if (!(in >> right) || (in >> extra)) throw ParseError("expected two symbols per merge", lineno);
    std::string merged = left + right;
    if (merged.ends_with(kEow)) {
      merged.resize(merged.size() - kEow.size());
    } else {
      merged += kContinuation;
    }
    units.insert(merged);
  }
  return SubwordVocab(std::move(units), char_fallback);
}

std::vector<std::string> SegmentWord(const SubwordVocab &vocab, const std::string &word) {
  if (word.empty() || IsReserved(word)) return {word};
  const std::vector<size_t> b = CharBoundaries(word);
  std::vector<std::string> pieces;
  size_t i = 0;
  while (i + 1 < b.size()) {
    size_t next = 0;
    for (size_t j = b.size() - 1; j > i; --j) {
      std::string piece = word.substr(b[i], b[j] - b[i]);
      if (j + 1 < b.size()) piece += kContinuation;
      if (vocab.Contains(piece)) {
        pieces.push_back(std::move(piece));
        next = j;
        break;
      }
    }
    if (next == 0) {
      if (!vocab.CharFallback()) {
        throw ConfigError("cannot segment '" + word + "' without character fallback");
      }
      std::string piece = word.substr(b[i], b[i + 1] - b[i]);
      if (i + 2 < b.size()) piece += kContinuation;
      pieces.push_back(std::move(piece));
      next = i + 1;
    }
    i = next;
  }
  return pieces;
}

std::vector<std::string> Desegment(std::span<const std::string> pieces) {
  std::vector<std::string> words;
  std::string pending;
  bool open = false;
  for (const std::string &p : pieces) {
    if (EndsWithMarker(p)) {
      pending.append(p, 0, p.size() - kContinuation.size());
      open = true;
    } else {
      words.push_back(pending + p);
      pending.clear();
      open = false;
    }
  }
  if (open) throw FormatError("dangling continuation marker after '" + pending + "'");
  return words;
}

Wfst BuildSubwordTransducer(std::span<const Label> words, const SubwordVocab &vocab,
                            const std::shared_ptr<SymbolTable> &symbols) {
  Wfst t(symbols);
  t.SetStart(t.AddState());
  t.SetFinal(0, Weight::One());
  std::set<Label> seen;
  for (Label w : words) {
    if (IsSpecialLabel(w) || !seen.insert(w).second) continue;
    if (IsCorrectionLabel(w) || w == kUnk) {
      t.AddArc(0, {w, w, Weight::One(), 0});
      continue;
    }
    const std::string text = symbols->Find(w);
    if (text.empty()) throw ConfigError("word label " + std::to_string(w) + " has no symbol");
    const auto pieces = SegmentWord(vocab, text);
    StateId src = 0;
    for (size_t k = 0; k < pieces.size(); ++k) {
      const StateId dst = k + 1 == pieces.size() ? 0 : t.AddState();
      t.AddArc(src, {k == 0 ? w : kEpsilon, symbols->AddSymbol(pieces[k]), Weight::One(), dst});
      src = dst;
    }
  }
  return t;
}

}  // namespace gecfst
