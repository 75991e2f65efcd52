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

#include "gecfst/lattice.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> Tokens(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> Utf8Chars(const std::string &s) {
  std::vector<std::string> out;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80 || out.empty()) {
      out.emplace_back(1, s[i]);
    } else {
      out.back() += s[i];
    }
  }
  return out;
}

void RequireAcyclic(const Wfst &f, const char *what) {
  if (!IsAcyclic(f)) throw std::logic_error(std::string(what) + " is cyclic");
}

std::array<double, kNumFeatures> Unit(Feature k, double v = 1.0) {
  std::array<double, kNumFeatures> f{};
  f[k] = v;
  return f;
}

}  // namespace

bool LambdaParams::AllFinite() const {
  for (size_t i = 0; i < kLambdaNames.size(); ++i) {
    if (!std::isfinite(LambdaGet(*this, i))) return false;
  }
  return true;
}

double &LambdaRef(LambdaParams &p, size_t i) {
  switch (i) {
    case 0: return p.smt;
    case 1: return p.corr;
    case 2: return p.mcorr;
    case 3: return p.kenlm;
    case 4: return p.nlm;
    case 5: return p.nmt;
    case 6: return p.wc;
  }
  throw std::out_of_range("lambda index");
}

double LambdaGet(const LambdaParams &p, size_t i) {
  return LambdaRef(const_cast<LambdaParams &>(p), i);
}

void ConfusionTable::Add(const std::string &word, const std::string &candidate) {
  if (word == candidate || word.empty() || candidate.empty()) return;
  table_[word].insert(candidate);
}

const std::set<std::string> &ConfusionTable::Candidates(const std::string &word) const {
  static const std::set<std::string> kNone;
  auto it = table_.find(word);
  return it == table_.end() ? kNone : it->second;
}

void ConfusionTable::Merge(const ConfusionTable &other) {
  for (const auto &[w, cands] : other.table_) {
    for (const auto &c : cands) Add(w, c);
  }
}

ConfusionTable ConfusionTable::Read(std::istream &is) {
  ConfusionTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected word<TAB>candidates", lineno);
    const std::string word = Trim(line.substr(0, tab));
    if (word.empty() || word.find(' ') != std::string::npos) {
      throw ParseError("bad word '" + word + "'", lineno);
    }
    std::istringstream cands(line.substr(tab + 1));
    for (std::string c; std::getline(cands, c, ',');) {
      c = Trim(c);
      if (!c.empty()) t.Add(word, c);
    }
  }
  return t;
}

ConfusionTable ConfusionTable::ReadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Read(in);
}

void ConfusionTable::Write(std::ostream &os) const {
  for (const auto &[w, cands] : table_) {
    os << w << '\t';
    bool first = true;
    for (const auto &c : cands) {
      os << (first ? "" : ",") << c;
      first = false;
    }
    os << '\n';
  }
}

ConfusionTable ConfusionTable::Generate(const std::vector<std::string> &words,
                                        const std::vector<std::string> &dictionary,
                                        int max_distance,
                                        const std::vector<std::vector<std::string>> &closed_classes) {
  ConfusionTable t;
  std::vector<std::vector<std::string>> dict_chars;
  dict_chars.reserve(dictionary.size());
  for (const auto &d : dictionary) dict_chars.push_back(Utf8Chars(d));
  for (const auto &w : words) {
    const auto wc = Utf8Chars(w);
    for (size_t i = 0; i < dictionary.size(); ++i) {
      const auto &dc = dict_chars[i];
      const size_t gap = wc.size() > dc.size() ? wc.size() - dc.size() : dc.size() - wc.size();
      if (gap > static_cast<size_t>(max_distance)) continue;
      if (Levenshtein(wc, dc) <= static_cast<size_t>(max_distance)) t.Add(w, dictionary[i]);
    }
    for (const auto &cls : closed_classes) {
      if (std::find(cls.begin(), cls.end(), w) == cls.end()) continue;
      for (const auto &c : cls) t.Add(w, c);
    }
  }
  return t;
}

void NormalizeNBest(NBestList &list) {
  std::vector<NBestEntry> unique;
  std::map<std::vector<std::string>, size_t> index;
  for (auto &e : list.entries) {
    auto [it, inserted] = index.try_emplace(e.tokens, unique.size());
    if (inserted) {
      unique.push_back(std::move(e));
    } else {
      unique[it->second].score = std::max(unique[it->second].score, e.score);
    }
  }
  if (!index.contains(list.source)) {
    double lowest = 0.0;
    for (size_t i = 0; i < unique.size(); ++i) {
      lowest = i == 0 ? unique[i].score : std::min(lowest, unique[i].score);
    }
    unique.push_back({list.source, lowest});
  }
  list.entries = std::move(unique);
}

std::vector<std::vector<NBestEntry>> ReadNBest(std::istream &is, size_t num_sentences) {
  std::vector<std::vector<NBestEntry>> out(num_sentences);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields;
    size_t pos = 0;
    for (;;) {
      const auto bar = line.find("|||", pos);
      fields.push_back(Trim(line.substr(pos, bar == std::string::npos ? bar : bar - pos)));
      if (bar == std::string::npos) break;
      pos = bar + 3;
    }
    if (fields.size() < 4) throw ParseError("expected 'id ||| tokens ||| features ||| score'", lineno);
    size_t id = 0;
    try {
      size_t used = 0;
      id = std::stoul(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("id");
    } catch (const std::exception &) {
      throw ParseError("bad sentence id '" + fields[0] + "'", lineno);
    }
    if (id >= num_sentences) {
      throw ParseError("sentence id " + fields[0] + " out of range", lineno);
    }
    char *end = nullptr;
    const double score = std::strtod(fields.back().c_str(), &end);
    if (fields.back().empty() || *end != '\0' || !std::isfinite(score)) {
      throw ParseError("bad score '" + fields.back() + "'", lineno);
    }
    out[id].push_back({Tokens(fields[1]), score});
  }
  return out;
}

std::vector<std::vector<NBestEntry>> ReadNBestFile(const std::string &path, size_t num_sentences) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadNBest(in, num_sentences);
}

std::shared_ptr<SymbolTable> SentenceSymbols(const SymbolTablePtr &base) {
  return base ? std::make_shared<SymbolTable>(*base) : std::make_shared<SymbolTable>();
}

Wfst BuildInputIdentity(const std::vector<std::string> &x,
                        const std::shared_ptr<SymbolTable> &symbols) {
  Wfst f = BuildLinear(x, Weight::One(), symbols);
  f.EnableFeatures(kNumFeatures);
  return f;
}

Wfst BuildInputNBest(NBestList list, double lambda_smt,
                     const std::shared_ptr<SymbolTable> &symbols) {
  NormalizeNBest(list);
  Wfst f(symbols);
  f.EnableFeatures(kNumFeatures);
  f.SetStart(f.AddState());
  // Trie over the label strings; children keyed by (state, label).
  std::map<std::pair<StateId, Label>, StateId> child;
  for (const NBestEntry &e : list.entries) {
    const size_t lev = Levenshtein(list.source, e.tokens);
    std::vector<Label> labels(lev, kMcorr);
    for (const auto &w : e.tokens) labels.push_back(symbols->AddSymbol(w));
    StateId s = f.Start();
    for (Label l : labels) {
      auto [it, inserted] = child.try_emplace({s, l}, kNoStateId);
      if (inserted) {
        it->second = f.AddState();
        f.AddArc(s, {l, l, Weight::One(), it->second});
      }
      s = it->second;
    }
    const auto feats = Unit(kFeatSmt, -e.score);
    f.SetFinal(s, Weight(-lambda_smt * e.score), feats);
  }
  return f;
}

Wfst BuildEditTransducer(std::span<const Label> words_in_scope, const ConfusionTable &table,
                         const std::shared_ptr<SymbolTable> &symbols) {
  Wfst e(symbols);
  e.SetStart(e.AddState());
  e.SetFinal(0, Weight::One());
  e.AddArc(0, {kSigma, kSigma, Weight::One(), 0});
  std::set<Label> done;
  for (Label w : words_in_scope) {
    if (IsSpecialLabel(w) || IsCorrectionLabel(w) || !done.insert(w).second) continue;
    const std::string text = symbols->Find(w);
    const auto &cands = table.Candidates(text);
    if (cands.empty()) continue;
    const StateId mid = e.AddState();
    e.AddArc(0, {w, kCorr, Weight::One(), mid});
    for (const auto &c : cands) e.AddArc(mid, {kEpsilon, symbols->AddSymbol(c), Weight::One(), 0});
  }
  return e;
}

Wfst BuildPenalizer(const LambdaParams &lambda, const SymbolTablePtr &symbols) {
  Wfst p(symbols);
  p.EnableFeatures(kNumFeatures);
  p.SetStart(p.AddState());
  p.SetFinal(0, Weight::One());
  p.AddArc(0, {kCorr, kCorr, Weight(lambda.corr), 0}, Unit(kFeatCorr));
  p.AddArc(0, {kMcorr, kMcorr, Weight(lambda.mcorr), 0}, Unit(kFeatMcorr));
  p.AddArc(0, {kPhi, kPhi, Weight(lambda.wc), 0}, Unit(kFeatWc));
  p.SetSemantics({.phi = PhiMode::kRest});
  return p;
}

std::vector<Label> OutputAlphabet(const Wfst &f) {
  std::set<Label> labels;
  for (StateId s = 0; s < static_cast<StateId>(f.NumStates()); ++s) {
    for (const Arc &a : f.Arcs(s)) {
      if (!IsSpecialLabel(a.olabel)) labels.insert(a.olabel);
    }
  }
  return {labels.begin(), labels.end()};
}

Wfst AssembleBase(const Wfst &input, const Wfst &edit) {
  Wfst b = Project(Compose(input, edit), ProjectSide::kOutput);
  RequireAcyclic(b, "base lattice");
  return b;
}

Wfst ScoreBase(const Wfst &base, const Wfst &penalizer, const Wfst &lm) {
  const Wfst bp = Compose(base, penalizer);
  RequireAcyclic(bp, "penalized lattice");
  Wfst h = Compose(bp, lm);
  RequireAcyclic(h, "word lattice");
  if (h.Start() == kNoStateId) throw DecodeError("word lattice is empty");
  return h;
}

Wfst AssembleHword(const Wfst &input, const Wfst &edit, const Wfst &penalizer, const Wfst &lm) {
  return ScoreBase(AssembleBase(input, edit), penalizer, lm);
}

Wfst ExpandSubwords(const Wfst &hword, const Wfst &t) {
  Wfst x = Project(Compose(hword, t), ProjectSide::kOutput);
  RequireAcyclic(x, "subword lattice");
  return x;
}

Wfst AssembleHbpe(const Wfst &hword, const Wfst &t) { return Optimize(ExpandSubwords(hword, t)); }

Wfst BuildCorrectionEraser(const SymbolTablePtr &symbols) {
  Wfst f(symbols);
  f.SetStart(f.AddState());
  f.SetFinal(0, Weight::One());
  f.AddArc(0, {kCorr, kEpsilon, Weight::One(), 0});
  f.AddArc(0, {kMcorr, kEpsilon, Weight::One(), 0});
  f.AddArc(0, {kPhi, kPhi, Weight::One(), 0});
  return f;
}

bool OracleContains(const Wfst &h, const std::vector<std::string> &reference) {
  if (h.Start() == kNoStateId) return false;
  const SymbolTablePtr &syms = h.OutputSymbols();
  std::vector<Label> labels;
  for (const auto &w : reference) {
    const Label l = syms ? syms->Find(w) : kNoLabel;
    if (l == kNoLabel) return false;
    labels.push_back(l);
  }
  const Wfst erased = Project(Compose(DropFeatures(h), BuildCorrectionEraser(syms)),
                              ProjectSide::kOutput);
  return !StringWeight(erased, labels).IsZero();
}

}  // namespace gecfst
