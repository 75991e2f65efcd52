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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gecfst/error.h"
#include "gecfst/fst_ops.h"
#include "gecfst/ngram.h"

namespace gecfst {
namespace {

using Corpus = std::vector<std::vector<std::string>>;

std::vector<std::string> Split(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Interpolated absolute discounting evaluated straight from raw counts,
// recursively, without any stored backoff table.
class CountOracle {
 public:
  CountOracle(const Corpus &corpus, int order, double d) : order_(order), d_(d) {
    for (const auto &s : corpus) {
      std::vector<std::string> seq{"<s>"};
      seq.insert(seq.end(), s.begin(), s.end());
      seq.push_back("</s>");
      for (size_t i = 1; i < seq.size(); ++i) {
        for (size_t k = 1; k <= static_cast<size_t>(order) && k <= i + 1; ++k) {
          counts_[{seq.begin() + (i + 1 - k), seq.begin() + (i + 1)}] += 1;
        }
        vocab_.insert(seq[i]);
      }
    }
  }

  double Prob(std::vector<std::string> h, const std::string &w) const {
    while (h.size() > static_cast<size_t>(order_ - 1)) h.erase(h.begin());
    if (h.empty()) {
      double n = 0, singles = 0;
      for (const auto &[g, c] : counts_) {
        if (g.size() != 1) continue;
        n += c;
        if (c == 1 && g[0] != "</s>") singles += 1;
      }
      const double unk = std::max(singles / n, 1e-7);
      if (!vocab_.contains(w)) return unk;
      return (1 - unk) * counts_.at({w}) / n;
    }
    double ch = 0, types = 0;
    for (const auto &[g, c] : counts_) {
      if (g.size() == h.size() + 1 && std::equal(h.begin(), h.end(), g.begin())) {
        ch += c;
        types += 1;
      }
    }
    std::vector<std::string> lower(h.begin() + 1, h.end());
    if (ch == 0) return Prob(lower, w);
    std::vector<std::string> hw = h;
    hw.push_back(w);
    auto it = counts_.find(hw);
    const double c = it == counts_.end() ? 0.0 : it->second;
    return std::max(c - d_, 0.0) / ch + d_ * types / ch * Prob(lower, w);
  }

  double SentenceLogProb(const std::vector<std::string> &s) const {
    std::vector<std::string> h{"<s>"};
    double total = 0;
    for (const auto &w : s) {
      total += std::log(Prob(h, w));
      h.push_back(vocab_.contains(w) ? w : "<unk>");
    }
    return total + std::log(Prob(h, "</s>"));
  }

 private:
  int order_;
  double d_;
  std::map<std::vector<std::string>, double> counts_;
  std::set<std::string> vocab_;
};

const Corpus &Toy() {
  static const Corpus c{Split("the cat sat on the mat"), Split("the dog sat"),
                        Split("a cat saw the dog on a mat")};
  return c;
}

std::vector<std::string> RandomSentence(std::mt19937 &rng, int max_len) {
  static const std::vector<std::string> words{"the", "cat", "sat", "on", "mat", "dog",
                                              "a",   "saw", "zebra", "quux"};
  std::vector<std::string> s(rng() % (max_len + 1));
  for (auto &w : s) w = words[rng() % words.size()];
  return s;
}

TEST_CASE("absolute discounting on the a-a-b corpus") {
  const auto m = NGramModel::Train({Split("a a b")}, 2, 0.5);
  auto p = [&](std::vector<std::string> h, const std::string &w) {
    return std::exp(m.LogProb(h, w));
  };
  // N = 4 tokens (a a b </s>); one singleton word type gives P(unk) = 1/4.
  CHECK(p({}, "a") == doctest::Approx(3.0 / 8).epsilon(1e-12));
  CHECK(p({}, "b") == doctest::Approx(3.0 / 16).epsilon(1e-12));
  CHECK(p({}, "</s>") == doctest::Approx(3.0 / 16).epsilon(1e-12));
  CHECK(p({}, "zzz") == doctest::Approx(1.0 / 4).epsilon(1e-12));
  CHECK(p({"<s>"}, "a") == doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(p({"a"}, "a") == doctest::Approx(0.4375).epsilon(1e-12));
  CHECK(p({"a"}, "b") == doctest::Approx(0.34375).epsilon(1e-12));
  CHECK(p({"b"}, "</s>") == doctest::Approx(0.59375).epsilon(1e-12));
  // Unseen bigram: backoff 0.5 times the unigram.
  CHECK(p({"b"}, "a") == doctest::Approx(0.5 * 3.0 / 8).epsilon(1e-12));
  for (const auto &h : {"<s>", "a", "b"}) {
    CHECK(std::exp(m.Backoff({m.Id(h)})) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("unigram model on a one-word corpus is normalized") {
  const auto m = NGramModel::Train({Split("a")}, 1, 0.5);
  const double total = std::exp(m.LogProb({}, "a")) + std::exp(m.LogProb({}, "<unk>")) +
                      std::exp(m.LogProb({}, "</s>"));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("every history distributes exactly one unit of mass") {
  for (int order = 1; order <= 4; ++order) {
    const auto m = NGramModel::Train(Toy(), order, 0.7);
    std::set<std::vector<NGramModel::WordId>> histories{{}};
    for (const auto &[h, bo] : m.Backoffs()) histories.insert(h);
    histories.insert({m.Id("zebra"), m.Id("the")});
    for (const auto &h : histories) {
      double total = 0;
      for (NGramModel::WordId w = 1; w < static_cast<int>(m.Vocab().size()); ++w) {
        total += std::exp(m.LogProb(h, w));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("duplicating the corpus doubles counts but keeps relative frequencies") {
  // Absolute discounting subtracts a fixed D from every count and the <unk>
  // mass comes from singletons, so smoothed probabilities do change. What
  // scale invariance leaves untouched is the ratio between the unigram
  // relative frequencies of seen words.
  Corpus twice = Toy();
  twice.insert(twice.end(), Toy().begin(), Toy().end());
  const auto once = NGramModel::Train(Toy(), 2, 0.5);
  const auto dup = NGramModel::Train(twice, 2, 0.5);
  const double r1 = once.LogProb({}, "the") - once.LogProb({}, "cat");
  const double r2 = dup.LogProb({}, "the") - dup.LogProb({}, "cat");
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
  CHECK(r1 == doctest::Approx(std::log(4.0 / 2.0)).epsilon(1e-12));
  // No singletons remain, so <unk> drops to the floor.
  CHECK(std::exp(dup.LogProb({}, "<unk>")) == doctest::Approx(1e-7));
}

TEST_CASE("logprob of the empty sentence is the sentence-end probability") {
  const auto m = NGramModel::Train(Toy(), 3, 0.5);
  CHECK(m.SentenceLogProb({}) == doctest::Approx(m.LogProb({"<s>"}, "</s>")).epsilon(1e-12));
}

TEST_CASE("logprob matches the count oracle") {
  std::mt19937 rng(3);
  for (int order = 1; order <= 4; ++order) {
    for (double d : {0.3, 0.5, 0.9}) {
      const auto m = NGramModel::Train(Toy(), order, d);
      const CountOracle oracle(Toy(), order, d);
      for (int i = 0; i < 50; ++i) {
        const auto s = RandomSentence(rng, 7);
        CHECK(m.SentenceLogProb(s) == doctest::Approx(oracle.SentenceLogProb(s)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("appending a token lowers the prefix probability") {
  // The full sentence score also swaps one </s> factor for another, so it is
  // not monotone; the prefix score is, since every factor is below one.
  std::mt19937 rng(5);
  const auto m = NGramModel::Train(Toy(), 3, 0.5);
  for (int i = 0; i < 100; ++i) {
    auto s = RandomSentence(rng, 6);
    const double before = m.PrefixLogProb(s);
    s.push_back(RandomSentence(rng, 1).empty() ? "the" : "mat");
    CHECK(m.PrefixLogProb(s) < before);
  }
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(NGramModel::Train({}, 2, 0.5), ConfigError);
  CHECK_THROWS_AS(NGramModel::Train(Toy(), 2, 0.0), ConfigError);
  CHECK_THROWS_AS(NGramModel::Train(Toy(), 2, 1.0), ConfigError);
  CHECK_THROWS_AS(NGramModel::Train(Toy(), 0, 0.5), ConfigError);
}

std::vector<Label> ToLabels(const std::vector<std::string> &s, const SymbolTable &syms) {
  std::vector<Label> out;
  for (const auto &w : s) {
    const Label l = syms.Find(w);
    out.push_back(l == kNoLabel ? kUnk : l);
  }
  return out;
}

TEST_CASE("bigram acceptor score of 'a b'") {
  const auto m = NGramModel::Train({Split("a b"), Split("b a b")}, 2, 0.5);
  auto syms = std::make_shared<SymbolTable>();
  const Wfst l = LmToFst(m, 0.8, syms);
  const double expected =
      -0.8 * (m.LogProb({"<s>"}, "a") + m.LogProb({"a"}, "b") + m.LogProb({"b"}, "</s>"));
  CHECK(StringWeight(l, std::vector<std::string>{"a", "b"}).Value() ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("acceptor scores equal scaled logprob on random sentences") {
  std::mt19937 rng(9);
  for (int order : {1, 2, 3, 5}) {
    const auto m = NGramModel::Train(Toy(), order, 0.6);
    auto syms = std::make_shared<SymbolTable>();
    const Wfst l = LmToFst(m, 1.7, syms);
    // Words outside the model need ids before they can be looked up.
    syms->AddSymbol("zebra");
    syms->AddSymbol("quux");
    for (int i = 0; i < 200; ++i) {
      auto s = RandomSentence(rng, 8);
      const double expected = -1.7 * m.SentenceLogProb(s);
      const Weight got = StringWeight(l, ToLabels(s, *syms));
      CHECK(std::fabs(got.Value() - expected) <= 1e-9);
      // Correction tokens are free.
      auto t = ToLabels(s, *syms);
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng() % (t.size() + 1)), kCorr);
      t.push_back(kMcorr);
      CHECK(std::fabs(StringWeight(l, t).Value() - expected) <= 1e-9);
    }
  }
}

TEST_CASE("zero scale gives every string weight zero") {
  const auto m = NGramModel::Train(Toy(), 3, 0.5);
  auto syms = std::make_shared<SymbolTable>();
  const Wfst l = LmToFst(m, 0.0, syms);
  std::mt19937 rng(13);
  for (int i = 0; i < 20; ++i) {
    CHECK(StringWeight(l, ToLabels(RandomSentence(rng, 5), *syms)) == Weight::One());
  }
}

TEST_CASE("epsilon backoff never exceeds the exact score") {
  std::mt19937 rng(15);
  const auto m = NGramModel::Train(Toy(), 3, 0.5);
  auto syms = std::make_shared<SymbolTable>();
  const Wfst exact = LmToFst(m, 1.0, syms);
  const Wfst approx = LmToFst(m, 1.0, syms, {.backoff = BackoffMode::kEpsilon});
  for (int i = 0; i < 100; ++i) {
    const auto s = ToLabels(RandomSentence(rng, 6), *syms);
    CHECK(StringWeight(approx, s).Value() <= StringWeight(exact, s).Value() + 1e-9);
  }
}

TEST_CASE("backoff arcs form short acyclic chains") {
  const int order = 4;
  const auto m = NGramModel::Train(Toy(), order, 0.5);
  auto syms = std::make_shared<SymbolTable>();
  const Wfst l = LmToFst(m, 1.0, syms);
  for (StateId s = 0; s < static_cast<StateId>(l.NumStates()); ++s) {
    int steps = 0;
    StateId q = s;
    for (;;) {
      StateId next = kNoStateId;
      for (const Arc &a : l.Arcs(q)) {
        if (a.ilabel == kPhi) next = a.nextstate;
      }
      if (next == kNoStateId) break;
      q = next;
      REQUIRE(++steps <= order - 1);
    }
  }
}

TEST_CASE("feature slot carries the unscaled cost") {
  const auto m = NGramModel::Train(Toy(), 2, 0.5);
  auto syms = std::make_shared<SymbolTable>();
  const Wfst l = LmToFst(m, 2.0, syms, {.num_features = 3, .feature_index = 1});
  const double scales[] = {0.0, 2.0, 0.0};
  const Wfst r = Reweight(l, scales);
  const auto s = ToLabels(Split("the cat sat"), *syms);
  CHECK(StringWeight(r, s).Value() == doctest::Approx(StringWeight(l, s).Value()).epsilon(1e-12));
}

TEST_CASE("ARPA round trip") {
  const auto m = NGramModel::Train(Toy(), 3, 0.5);
  std::stringstream arpa;
  m.WriteArpa(arpa);
  CHECK(arpa.str().rfind("\\data\\\nngram 1=", 0) == 0);
  const auto back = NGramModel::ReadArpa(arpa);
  CHECK(back.Order() == 3);
  std::mt19937 rng(21);
  for (int i = 0; i < 50; ++i) {
    const auto s = RandomSentence(rng, 6);
    CHECK(back.SentenceLogProb(s) == doctest::Approx(m.SentenceLogProb(s)).epsilon(1e-12));
  }
}

TEST_CASE("ARPA parse errors") {
  auto line_of = [](const std::string &text) {
    std::istringstream in(text);
    try {
      NGramModel::ReadArpa(in);
    } catch (const ParseError &e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("\\data\\\nngram 1=1\n\n\\1-grams:\n-1.0\ta\tb\tc\n\\end\\\n") == 5);
  CHECK(line_of("\\data\\\nngram 1=2\n\n\\1-grams:\n-1.0\ta\n\\end\\\n") == 6);
  CHECK(line_of("\\data\\\nngram 1=1\n\n\\1-grams:\nxyz\ta\n\\end\\\n") == 5);
  CHECK(line_of("\\data\\\nngram 1=1\n\n\\1-grams:\n-1\ta\n") > 0);
}

}  // namespace
}  // namespace gecfst
