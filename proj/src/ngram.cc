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

#include "gecfst/ngram.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "gecfst/error.h"

namespace gecfst {

namespace {

constexpr double kUnkFloor = 1e-7;

std::vector<NGramModel::WordId> Suffix(const std::vector<NGramModel::WordId> &v, size_t len) {
  return {v.end() - static_cast<std::ptrdiff_t>(len), v.end()};
}

}  // namespace

NGramModel::NGramModel() {
  Intern(kBosSymbol);
  Intern(kEosSymbol);
  Intern(kUnkSymbol);
}

NGramModel::WordId NGramModel::Intern(const std::string &word) {
  auto [it, inserted] = ids_.try_emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(word);
  return it->second;
}

NGramModel::WordId NGramModel::Id(const std::string &word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnkWord : it->second;
}

double NGramModel::Backoff(const std::vector<WordId> &history) const {
  auto it = backoffs_.find(history);
  return it == backoffs_.end() ? 0.0 : it->second;
}

double NGramModel::LogProb(std::span<const WordId> history, WordId word) const {
  if (word == kBos || word < 0 || static_cast<size_t>(word) >= words_.size()) word = kUnkWord;
  const size_t max_len = std::min(history.size(), static_cast<size_t>(order_ - 1));
  std::vector<WordId> key(history.end() - static_cast<std::ptrdiff_t>(max_len), history.end());
  double acc = 0.0;
  for (;;) {
    key.push_back(word);
    auto it = probs_.find(key);
    key.pop_back();
    if (it != probs_.end()) return acc + it->second;
    if (key.empty()) break;
    acc += Backoff(key);
    key.erase(key.begin());
  }
  // A word with no unigram entry of its own is scored as <unk>.
  if (word != kUnkWord) {
    auto it = probs_.find({kUnkWord});
    if (it != probs_.end()) return acc + it->second;
  }
  return -std::numeric_limits<double>::infinity();
}

double NGramModel::LogProb(const std::vector<std::string> &history,
                           const std::string &word) const {
  std::vector<WordId> ids;
  ids.reserve(history.size());
  for (const auto &w : history) ids.push_back(Id(w));
  return LogProb(ids, Id(word));
}

double NGramModel::PrefixLogProb(const std::vector<std::string> &sentence) const {
  std::vector<WordId> hist{kBos};
  double total = 0.0;
  for (const auto &w : sentence) {
    const WordId id = Id(w);
    total += LogProb(hist, id);
    hist.push_back(id);
  }
  return total;
}

double NGramModel::SentenceLogProb(const std::vector<std::string> &sentence) const {
  std::vector<WordId> hist{kBos};
  for (const auto &w : sentence) hist.push_back(Id(w));
  return PrefixLogProb(sentence) + LogProb(hist, kEos);
}

NGramModel NGramModel::Train(const std::vector<std::vector<std::string>> &corpus, int order,
                             double discount) {
  if (corpus.empty()) throw ConfigError("cannot train a language model on an empty corpus");
  if (order < 1) throw ConfigError("n-gram order must be at least 1");
  if (!(discount > 0.0 && discount < 1.0)) throw ConfigError("discount must lie in (0,1)");

  NGramModel m;
  m.order_ = order;
  // counts[k] holds the k-gram counts; the last entry is the predicted word.
  std::vector<std::map<std::vector<WordId>, double>> counts(order + 1);
  for (const auto &sentence : corpus) {
    std::vector<WordId> seq{kBos};
    for (const auto &w : sentence) seq.push_back(m.Intern(w));
    seq.push_back(kEos);
    for (size_t i = 1; i < seq.size(); ++i) {
      for (int k = 1; k <= order && static_cast<size_t>(k) <= i + 1; ++k) {
        counts[k][{seq.begin() + static_cast<std::ptrdiff_t>(i + 1 - k),
                   seq.begin() + static_cast<std::ptrdiff_t>(i + 1)}] += 1.0;
      }
    }
  }

  double total = 0.0;
  int singletons = 0;
  for (const auto &[gram, c] : counts[1]) {
    total += c;
    if (c == 1.0 && gram[0] != kEos) ++singletons;
  }
  const double p_unk = std::max(singletons / total, kUnkFloor);
  for (const auto &[gram, c] : counts[1]) m.probs_[gram] = std::log((1.0 - p_unk) * c / total);
  m.probs_[{kUnkWord}] = std::log(p_unk);

  for (int k = 2; k <= order; ++k) {
    struct HistoryStats {
      double total = 0.0;
      int types = 0;
    };
    std::map<std::vector<WordId>, HistoryStats> histories;
    for (const auto &[gram, c] : counts[k]) {
      auto &h = histories[{gram.begin(), gram.end() - 1}];
      h.total += c;
      ++h.types;
    }
    for (const auto &[h, st] : histories) {
      m.backoffs_[h] = std::log(discount * st.types / st.total);
    }
    for (const auto &[gram, c] : counts[k]) {
      const std::vector<WordId> h(gram.begin(), gram.end() - 1);
      const HistoryStats &st = histories.at(h);
      const double gamma = discount * st.types / st.total;
      const double lower =
          std::exp(m.LogProb(std::span<const WordId>(h).subspan(1), gram.back()));
      m.probs_[gram] = std::log((c - discount) / st.total + gamma * lower);
    }
  }
  return m;
}

void NGramModel::WriteArpa(std::ostream &os) const {
  std::vector<std::vector<const std::vector<WordId> *>> by_order(order_ + 1);
  for (const auto &[gram, p] : probs_) by_order[gram.size()].push_back(&gram);
  // <s> has no probability of its own but carries the sentence-start backoff.
  const std::vector<WordId> bos{kBos};
  by_order[1].insert(by_order[1].begin(), &bos);

  os << "\\data\\\n";
  for (int k = 1; k <= order_; ++k) os << "ngram " << k << "=" << by_order[k].size() << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int k = 1; k <= order_; ++k) {
    os << "\n\\" << k << "-grams:\n";
    for (const auto *gram : by_order[k]) {
      auto it = probs_.find(*gram);
      os << (it == probs_.end() ? -99.0 : it->second / std::numbers::ln10) << '\t';
      for (size_t i = 0; i < gram->size(); ++i) os << (i ? " " : "") << words_[(*gram)[i]];
      auto bo = backoffs_.find(*gram);
      if (bo != backoffs_.end()) os << '\t' << bo->second / std::numbers::ln10;
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
}

NGramModel NGramModel::ReadArpa(std::istream &is) {
  NGramModel m;
  std::string line;
  int lineno = 0;
  int section = 0;  // 0 header, k inside the k-gram section, -1 after \end\ .
  std::vector<size_t> declared;
  auto parse_double = [&](const std::string &s) {
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "'", lineno);
    return v;
  };
  std::vector<size_t> seen;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line == "\\data\\") {
      section = 0;
      continue;
    }
    if (line == "\\end\\") {
      section = -1;
      break;
    }
    if (line.size() > 7 && line.front() == '\\' && line.ends_with("-grams:")) {
      section = std::stoi(line.substr(1));
      if (section < 1) throw ParseError("bad section header", lineno);
      m.order_ = std::max(m.order_, section);
      if (seen.size() <= static_cast<size_t>(section)) seen.resize(section + 1, 0);
      continue;
    }
    if (section == 0) {
      if (line.rfind("ngram ", 0) != 0) throw ParseError("expected 'ngram k=count'", lineno);
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'ngram k=count'", lineno);
      const int k = std::stoi(line.substr(6, eq - 6));
      if (k < 1) throw ParseError("bad n-gram order", lineno);
      if (declared.size() <= static_cast<size_t>(k)) declared.resize(k + 1, 0);
      declared[k] = std::stoul(line.substr(eq + 1));
      continue;
    }
    if (section < 0) break;
    std::vector<std::string> fields;
    {
      std::istringstream in(line);
      for (std::string f; in >> f;) fields.push_back(std::move(f));
    }
    const size_t k = static_cast<size_t>(section);
    if (fields.size() != k + 1 && fields.size() != k + 2) {
      throw ParseError("expected " + std::to_string(k) + " words plus probability", lineno);
    }
    std::vector<WordId> gram;
    for (size_t i = 1; i <= k; ++i) gram.push_back(m.Intern(fields[i]));
    const double lp = parse_double(fields[0]) * std::numbers::ln10;
    if (!(k == 1 && gram[0] == kBos)) m.probs_[gram] = lp;
    if (fields.size() == k + 2) m.backoffs_[gram] = parse_double(fields[k + 1]) * std::numbers::ln10;
    ++seen[k];
  }
  if (section != -1) throw ParseError("missing \\end\\ marker", lineno);
  if (m.order_ == 0) throw ParseError("no n-gram sections", lineno);
  for (size_t k = 1; k < declared.size() && k < seen.size(); ++k) {
    if (declared[k] != seen[k]) {
      throw ParseError(std::to_string(k) + "-gram count does not match the header", lineno);
    }
  }
  if (!m.probs_.contains({kUnkWord})) m.probs_[{kUnkWord}] = std::log(kUnkFloor);
  return m;
}

NGramModel NGramModel::ReadArpaFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadArpa(in);
}

Wfst LmToFst(const NGramModel &model, double lambda, const std::shared_ptr<SymbolTable> &symbols,
             const LmFstOptions &opts) {
  using WordId = NGramModel::WordId;
  // States: the empty history, every history with stored continuations and
  // every history with a backoff weight.
  std::map<std::vector<WordId>, StateId> states;
  states[{}] = 0;
  for (const auto &[gram, p] : model.Probs()) {
    if (gram.size() > 1) states.try_emplace({gram.begin(), gram.end() - 1}, 0);
  }
  for (const auto &[h, bo] : model.Backoffs()) {
    if (static_cast<int>(h.size()) < model.Order()) states.try_emplace(h, 0);
  }
  Wfst f(symbols);
  for (auto &[h, s] : states) s = f.AddState();

  const size_t max_hist = static_cast<size_t>(model.Order() - 1);
  auto state_of = [&](const std::vector<WordId> &hist) {
    for (size_t len = std::min(hist.size(), max_hist);; --len) {
      auto it = states.find(Suffix(hist, len));
      if (it != states.end()) return it->second;
    }
  };
  std::vector<Label> labels(model.Vocab().size());
  // <s> and </s> never label an arc.
  for (size_t i = NGramModel::kUnkWord; i < labels.size(); ++i) {
    labels[i] = symbols->AddSymbol(model.Vocab()[i]);
  }

  const bool feats = opts.num_features > 0;
  if (feats) f.EnableFeatures(opts.num_features);
  std::vector<double> fv(feats ? opts.num_features : 0, 0.0);
  auto cost = [&](double logp) {
    if (feats) fv[opts.feature_index] = -logp;
    return Weight(-lambda * logp);
  };
  const std::vector<double> zeros(fv.size(), 0.0);

  for (const auto &[gram, logp] : model.Probs()) {
    const WordId w = gram.back();
    if (w == NGramModel::kEos || w == NGramModel::kBos) continue;
    const std::vector<WordId> h(gram.begin(), gram.end() - 1);
    const StateId src = states.at(h);
    const Weight wt = cost(logp);
    f.AddArc(src, {labels[w], labels[w], wt, state_of(gram)}, fv);
  }
  const Label backoff_label = opts.backoff == BackoffMode::kFailure ? kPhi : kEpsilon;
  for (const auto &[h, s] : states) {
    if (!h.empty()) {
      const Weight wt = cost(model.Backoff(h));
      f.AddArc(s, {backoff_label, backoff_label, wt, state_of(Suffix(h, h.size() - 1))}, fv);
    }
    const Weight end = cost(model.LogProb(h, NGramModel::kEos));
    f.SetFinal(s, end, fv);
    for (Label t : opts.transparent) f.AddArc(s, {t, t, Weight::One(), s}, zeros);
  }
  f.SetStart(state_of({NGramModel::kBos}));
  f.SetSemantics({.phi = PhiMode::kFailure, .unk_matches_oov = true});
  return f;
}

}  // namespace gecfst
