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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "gecfst/error.h"
#include "gecfst/lattice.h"
#include "gecfst/tune_eval.h"

namespace gecfst {
namespace {

using testing::Split;

// Straightforward recount of GLEU with n-grams as joined strings.
double GleuOracle(const std::vector<Sentence> &hyps, const std::vector<Sentence> &srcs,
                  const std::vector<Sentence> &refs, int max_n) {
  auto grams = [](const Sentence &s, int n) {
    std::vector<std::string> out;
    for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
      std::string g;
      for (int k = 0; k < n; ++k) g += s[i + k] + "\x1f";
      out.push_back(g);
    }
    return out;
  };
  double h_total = 0, r_total = 0;
  for (size_t i = 0; i < hyps.size(); ++i) h_total += hyps[i].size(), r_total += refs[i].size();
  if (h_total == 0) return 0;
  double logs = 0;
  int used = 0;
  for (int n = 1; n <= max_n; ++n) {
    double m = 0, d = 0, h = 0;
    for (size_t i = 0; i < hyps.size(); ++i) {
      const auto gh = grams(hyps[i], n), gs = grams(srcs[i], n), gr = grams(refs[i], n);
      std::vector<std::string> seen;
      for (const auto &g : gh) {
        if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
        seen.push_back(g);
        const double ch = std::count(gh.begin(), gh.end(), g);
        const double cs = std::count(gs.begin(), gs.end(), g);
        const double cr = std::count(gr.begin(), gr.end(), g);
        h += ch;
        m += std::min(ch, cr);
        d += std::max(0.0, std::min(ch, cs) - cr);
      }
    }
    if (h == 0) continue;
    const double p = std::max(0.0, m - d) / h;
    if (p == 0) return 0;
    logs += std::log(p);
    ++used;
  }
  if (used == 0) return 0;
  return std::min(1.0, std::exp(1 - r_total / h_total)) * std::exp(logs / used);
}

Sentence RandomSentence(std::mt19937 &rng, int max_len) {
  const char *words[] = {"a", "b", "c", "d"};
  Sentence s(std::uniform_int_distribution<int>(0, max_len)(rng));
  for (auto &w : s) w = words[std::uniform_int_distribution<int>(0, 3)(rng)];
  return s;
}

Sentence ApplyEdits(const Sentence &src, std::vector<Edit> edits) {
  std::sort(edits.begin(), edits.end());
  Sentence out;
  size_t pos = 0;
  for (const Edit &e : edits) {
    out.insert(out.end(), src.begin() + pos, src.begin() + e.start);
    out.insert(out.end(), e.replacement.begin(), e.replacement.end());
    pos = e.end;
  }
  out.insert(out.end(), src.begin() + pos, src.end());
  return out;
}

TEST_CASE("gleu degenerate cases") {
  const std::vector<Sentence> src = {Split("a b c d"), Split("x y z")};
  const std::vector<Sentence> ref = {Split("a b e d"), Split("x y z w")};
  CHECK(Gleu(ref, src, ref) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Sentence> empty = {{}, {}};
  CHECK(Gleu(empty, src, ref) == 0.0);
  CHECK(Gleu(std::vector<Sentence>{}, std::vector<Sentence>{}, std::vector<Sentence>{}) == 0.0);
  CHECK_THROWS_AS(Gleu(ref, std::vector<Sentence>{src[0]}, ref), ConfigError);
}

TEST_CASE("gleu hand-computed two-sentence table") {
  // sentence 1: src "the cat sat", hyp = ref "the cat sits"
  // sentence 2: src = hyp "a dog run", ref "a dog runs"
  //   n=1: m = 3 + 2, d = 0 + 1 (run), h = 6      -> p1 = 4/6
  //   n=2: m = 2 + 1, d = 0 + 1 (dog run), h = 4  -> p2 = 2/4
  //   n=3: m = 1 + 0, d = 0 + 1, h = 2            -> p3 = 0
  //   |ref| = |hyp| = 6, so BP = 1
  const std::vector<Sentence> src = {Split("the cat sat"), Split("a dog run")};
  const std::vector<Sentence> hyp = {Split("the cat sits"), Split("a dog run")};
  const std::vector<Sentence> ref = {Split("the cat sits"), Split("a dog runs")};
  CHECK(std::abs(Gleu(hyp, src, ref, 1) - 4.0 / 6.0) < 1e-12);
  CHECK(std::abs(Gleu(hyp, src, ref, 2) - std::sqrt(1.0 / 3.0)) < 1e-12);
  CHECK(Gleu(hyp, src, ref, 4) == 0.0);

  // Shorter hypothesis: drop "sits". n=1: m = 2 + 2, d = 1, h = 5 -> 3/5;
  // n=2: m = 1 + 1, d = 1, h = 3 -> 1/3. BP = exp(1 - 6/5).
  const std::vector<Sentence> shorter = {Split("the cat"), Split("a dog run")};
  const double want = std::exp(1.0 - 6.0 / 5.0) * std::sqrt(3.0 / 5.0 * 1.0 / 3.0);
  CHECK(std::abs(Gleu(shorter, src, ref, 2) - want) < 1e-12);
}

TEST_CASE("gleu agrees with a recount, permutation invariant, bounded") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Sentence> h(n), s(n), r(n);
    for (int i = 0; i < n; ++i) {
      s[i] = RandomSentence(rng, 6);
      r[i] = RandomSentence(rng, 6);
      h[i] = rng() % 2 ? r[i] : RandomSentence(rng, 6);
    }
    const int max_n = std::uniform_int_distribution<int>(1, 4)(rng);
    const double g = Gleu(h, s, r, max_n);
    CHECK(std::abs(g - GleuOracle(h, s, r, max_n)) < 1e-12);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 + 1e-12);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Sentence> ph, ps, pr;
    for (int i : perm) ph.push_back(h[i]), ps.push_back(s[i]), pr.push_back(r[i]);
    CHECK(std::abs(Gleu(ph, ps, pr, max_n) - g) < 1e-12);
  }
}

TEST_CASE("edit extraction") {
  CHECK(ExtractEdits(Split("a b c"), Split("a b c")).empty());
  CHECK(ExtractEdits(Split("a b c"), Split("a x c")) ==
        std::vector<Edit>{{1, 2, {"x"}}});
  CHECK(ExtractEdits(Split("a b c"), Split("a c")) == std::vector<Edit>{{1, 2, {}}});
  CHECK(ExtractEdits(Split("a c"), Split("a b c")) == std::vector<Edit>{{1, 1, {"b"}}});
  // adjacent operations merge into one span
  CHECK(ExtractEdits(Split("a b c d"), Split("a x y d")) ==
        std::vector<Edit>{{1, 3, {"x", "y"}}});
  CHECK(ExtractEdits(Split("a b c d e"), Split("x b c y e")) ==
        std::vector<Edit>{{0, 1, {"x"}}, {3, 4, {"y"}}});
  CHECK(ExtractEdits({}, Split("a b")) == std::vector<Edit>{{0, 0, {"a", "b"}}});

  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Sentence s = RandomSentence(rng, 7), h = RandomSentence(rng, 7);
    const auto edits = ExtractEdits(s, h);
    CHECK(ApplyEdits(s, edits) == h);
    size_t cost = 0;
    for (size_t k = 0; k < edits.size(); ++k) {
      CHECK(edits[k].start <= edits[k].end);
      if (k > 0) CHECK(edits[k - 1].end < edits[k].start + (edits[k].start == edits[k].end));
      cost += std::max(edits[k].end - edits[k].start, edits[k].replacement.size());
    }
    // merged spans cover at least the minimum number of edit operations
    CHECK(cost >= Levenshtein(s, h));
  }
}

TEST_CASE("edit f0.5 examples") {
  const std::vector<Sentence> src = {Split("a b c d")};
  const std::vector<std::vector<Edit>> gold = {{{1, 2, {"x"}}, {3, 4, {"y"}}}};

  PRF perfect = EditF05(std::vector<Sentence>{Split("a x c y")}, src, gold);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f05 == 1.0);

  PRF none = EditF05(src, src, gold);
  CHECK(none.precision == 1.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f05 == 0.0);

  PRF half = EditF05(std::vector<Sentence>{Split("a x c z")}, src, gold);
  CHECK(std::abs(half.precision - 0.5) < 1e-12);
  CHECK(std::abs(half.recall - 0.5) < 1e-12);
  CHECK(std::abs(half.f05 - 0.5) < 1e-12);

  // nothing to correct and nothing proposed
  PRF empty = EditF05(src, src, std::vector<std::vector<Edit>>{{}});
  CHECK(empty.precision == 1.0);
  CHECK(empty.recall == 1.0);
  CHECK(empty.f05 == 1.0);

  // hand-computed two sentences: proposals [1,2)->x, [3,4)->z, [1,2)->s,
  // [3,3)->t; only the first is gold, and 1 of 2 gold edits is found
  const std::vector<Sentence> src2 = {Split("a b c d"), Split("p q r")};
  const std::vector<Sentence> hyp2 = {Split("a x c z"), Split("p s r t")};
  const std::vector<std::vector<Edit>> gold2 = {{{1, 2, {"x"}}}, {{1, 2, {"q2"}}}};
  PRF two = EditF05(hyp2, src2, gold2);
  const double p = 1.0 / 4.0, r = 1.0 / 2.0;
  CHECK(std::abs(two.precision - p) < 1e-12);
  CHECK(std::abs(two.recall - r) < 1e-12);
  CHECK(std::abs(two.f05 - 1.25 * p * r / (0.25 * p + r)) < 1e-12);
}

TEST_CASE("prf properties") {
  for (size_t gold = 0; gold <= 6; ++gold) {
    for (size_t proposed = 0; proposed <= 6; ++proposed) {
      for (size_t matched = 0; matched <= std::min(gold, proposed); ++matched) {
        const PRF r = PrfFromCounts(matched, proposed, gold);
        CHECK(r.precision >= 0.0);
        CHECK(r.precision <= 1.0);
        CHECK(r.recall >= 0.0);
        CHECK(r.recall <= 1.0);
        if (r.f05 > 0) {
          CHECK(r.f05 >= std::min(r.precision, r.recall) - 1e-12);
          CHECK(r.f05 <= std::max(r.precision, r.recall) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("gold edits reader and corpus validation") {
  std::istringstream in("0\t1\t2\tx\n\n1\t0\t0\tthe big\n0\t3\t4\t\n");
  const auto gold = ReadGoldEdits(in, 2);
  REQUIRE(gold.size() == 2);
  CHECK(gold[0] == std::vector<Edit>{{1, 2, {"x"}}, {3, 4, {}}});
  CHECK(gold[1] == std::vector<Edit>{{0, 0, {"the", "big"}}});

  for (const char *bad : {"0\t1\tx\n", "5\t0\t1\ta\n", "0\t2\t1\ta\n", "0\t1\t2\n", "-1\t0\t1\ta\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(ReadGoldEdits(b, 2), ParseError);
  }

  EvalCorpus c;
  c.sources = {Split("a b c d"), Split("p q")};
  c.references = {{Split("a x c")}, {Split("p q")}};
  c.gold_edits = gold;
  CHECK_NOTHROW(c.Validate());
  c.gold_edits[1].push_back({1, 5, {"z"}});
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c.gold_edits[1] = {{0, 2, {"z"}}, {1, 2, {"w"}}};
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c.gold_edits.clear();
  c.references.pop_back();
  CHECK_THROWS_AS(c.Validate(), ConfigError);
}

Wfst Base(const Sentence &x, const ConfusionTable &table) {
  auto syms = std::make_shared<SymbolTable>();
  const Wfst i = BuildInputIdentity(x, syms);
  return AssembleBase(i, BuildEditTransducer(OutputAlphabet(i), table, syms));
}

TEST_CASE("oracle error rate") {
  ConfusionTable small;
  small.Add("teh", "the");
  ConfusionTable big = small;
  big.Add("cat", "cats");

  EvalCorpus c;
  c.sources = {Split("teh cat"), Split("a cat"), Split("teh dog"), Split("a dog")};
  c.references = {{Split("the cat")}, {Split("a cats")}, {Split("the dog")}, {Split("the dog")}};

  EvalCorpus same = c;
  for (size_t i = 0; i < same.sources.size(); ++i) same.references[i] = {same.sources[i]};
  CHECK(OracleErrorRate(same, [&](size_t i) { return Base(same.sources[i], small); }) == 0.0);

  // membership by enumeration: sentences 1 and 3 need edits outside `small`
  const double with_small = OracleErrorRate(c, [&](size_t i) { return Base(c.sources[i], small); });
  CHECK(with_small == 0.5);
  const double with_big = OracleErrorRate(c, [&](size_t i) { return Base(c.sources[i], big); });
  CHECK(with_big == 0.25);
  CHECK(with_big <= with_small);

  // random tables: growing the table never raises the rate
  std::mt19937 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 30; ++trial) {
    EvalCorpus rc;
    for (int k = 0; k < 5; ++k) {
      Sentence s(3), r(3);
      for (int j = 0; j < 3; ++j) {
        s[j] = vocab[rng() % vocab.size()];
        r[j] = rng() % 3 ? s[j] : vocab[rng() % vocab.size()];
      }
      rc.sources.push_back(s);
      rc.references.push_back({r});
    }
    ConfusionTable t1, t2;
    for (int k = 0; k < 6; ++k) {
      const auto w = vocab[rng() % vocab.size()], v = vocab[rng() % vocab.size()];
      if (w == v) continue;
      t2.Add(w, v);
      if (k % 2 == 0) t1.Add(w, v);
    }
    const double e1 = OracleErrorRate(rc, [&](size_t i) { return Base(rc.sources[i], t1); });
    const double e2 = OracleErrorRate(rc, [&](size_t i) { return Base(rc.sources[i], t2); });
    CHECK(e2 <= e1);
  }
}

TEST_CASE("powell recovers quadratic optima") {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> c = {2.5, 7.25, 0.4, 9.9, 5.0};
  PowellOptions opts;
  opts.lower.assign(c.size(), 0.0);
  opts.upper.assign(c.size(), 10.0);
  const auto quad = [&](std::span<const double> x) {
    double v = 0;
    for (size_t i = 0; i < x.size(); ++i) v -= (x[i] - c[i]) * (x[i] - c[i]);
    return v;
  };
  const PowellResult r = PowellMaximize(quad, std::vector<double>(c.size(), 1.0), opts);
  for (size_t i = 0; i < c.size(); ++i) CHECK(std::abs(r.point[i] - c[i]) < 1e-3);

  PowellOptions one;
  one.lower = {0.0};
  one.upper = {10.0};
  const PowellResult r1 = PowellMaximize(
      [](std::span<const double> x) { return -(x[0] - 2.5) * (x[0] - 2.5); }, {9.0}, one);
  CHECK(std::abs(r1.point[0] - 2.5) < 1e-3);

  // correlated coordinates need the direction updates
  PowellOptions two;
  two.lower = {0.0, 0.0};
  two.upper = {10.0, 10.0};
  const PowellResult r2 = PowellMaximize(
      [](std::span<const double> x) {
        const double u = x[0] + x[1] - 3.0, v = x[0] - x[1];
        return -u * u - 50.0 * v * v;
      },
      {8.0, 1.0}, two);
  CHECK(std::abs(r2.point[0] - 1.5) < 1e-3);
  CHECK(std::abs(r2.point[1] - 1.5) < 1e-3);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
}

TEST_CASE("powell edge cases") {
  PowellOptions opts;
  opts.lower = {0.0, 0.0};
  opts.upper = {10.0, 10.0};
  const std::vector<double> init = {3.0, 4.0};
  CHECK(PowellMaximize([](std::span<const double>) { return 1.0; }, init, opts).point == init);

  PowellOptions none = opts;
  none.max_sweeps = 0;
  int calls = 0;
  const auto r = PowellMaximize(
      [&](std::span<const double> x) {
        ++calls;
        return -x[0];
      },
      init, none);
  CHECK(r.point == init);
  CHECK(calls <= 1);

  PowellOptions bad = opts;
  bad.lower = {0.0};
  CHECK_THROWS_AS(PowellMaximize([](std::span<const double>) { return 0.0; }, init, bad),
                  ConfigError);
  bad = opts;
  bad.lower = {5.0, 0.0};
  bad.upper = {1.0, 10.0};
  CHECK_THROWS_AS(PowellMaximize([](std::span<const double>) { return 0.0; }, init, bad),
                  ConfigError);
}

TEST_CASE("powell never worse than init, history monotone") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    // bumpy step function: the coarse grid can easily miss its maximum
    std::vector<double> centers(3);
    for (auto &c : centers) c = std::uniform_real_distribution<double>(0, 10)(rng);
    const auto f = [&](std::span<const double> x) {
      double v = 0;
      for (size_t i = 0; i < x.size(); ++i) {
        v += std::floor(std::cos(3 * x[i]) * 4) - std::abs(x[i] - centers[i]);
      }
      return v;
    };
    std::vector<double> init(3);
    for (auto &x : init) x = std::uniform_real_distribution<double>(0, 10)(rng);
    PowellOptions opts;
    opts.lower.assign(3, 0.0);
    opts.upper.assign(3, 10.0);
    opts.seed = trial;
    const PowellResult r = PowellMaximize(f, init, opts);
    CHECK(f(r.point) >= f(init));
    CHECK(r.value == f(r.point));
    for (size_t k = 1; k < r.history.size(); ++k) {
      CHECK(r.history[k].value >= r.history[k - 1].value);
    }
  }
}

TEST_CASE("powell tune over lambdas") {
  const LambdaParams init;
  const std::vector<size_t> free = {1, 3};  // corr, kenlm
  const auto obj = [](const LambdaParams &p) {
    return -(p.corr - 4.0) * (p.corr - 4.0) - (p.kenlm - 0.5) * (p.kenlm - 0.5) - p.nlm;
  };
  const auto r = PowellTune(obj, init, free, 0.0, 10.0, PowellOptions{});
  CHECK(std::abs(r.best.corr - 4.0) < 1e-3);
  CHECK(std::abs(r.best.kenlm - 0.5) < 1e-3);
  CHECK(r.best.wc == init.wc);
  CHECK(r.best.smt == init.smt);
  CHECK(r.best.nlm == init.nlm);
  const std::vector<size_t> bogus = {9};
  CHECK_THROWS_AS(PowellTune(obj, init, bogus, 0.0, 10.0, PowellOptions{}), ConfigError);
}

}  // namespace
}  // namespace gecfst
