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

// Brute-force reference computations and random generators shared by the
// test binaries. Nothing here calls the algorithms under test except for
// reading a machine's arcs.

#ifndef GECFST_TESTS_ORACLES_H_
#define GECFST_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gecfst/wfst.h"

namespace gecfst::testing {

using Str = std::vector<Label>;
using Relation = std::map<std::pair<Str, Str>, double>;
using Language = std::map<Str, double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void Relax(Relation &rel, const Str &x, const Str &y, double w) {
  auto [it, inserted] = rel.try_emplace({x, y}, w);
  if (!inserted) it->second = std::min(it->second, w);
}

inline void Relax(Language &lang, const Str &x, double w) {
  auto [it, inserted] = lang.try_emplace(x, w);
  if (!inserted) it->second = std::min(it->second, w);
}

// Every (input, output) pair with both sides no longer than the bounds,
// mapped to its min path weight. Epsilon labels are dropped from the
// strings. `max_depth` bounds the path length so epsilon cycles terminate.
inline Relation EnumerateRelation(const Wfst &f, size_t max_in, size_t max_out,
                                  size_t max_depth = 0) {
  Relation rel;
  if (f.Start() == kNoStateId) return rel;
  if (max_depth == 0) max_depth = (max_in + max_out + 1) * (f.NumStates() + 1);
  struct Frame {
    StateId s;
    Str in, out;
    double w;
    size_t depth;
  };
  std::vector<Frame> stack{{f.Start(), {}, {}, 0.0, 0}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (f.IsFinal(fr.s)) Relax(rel, fr.in, fr.out, fr.w + f.Final(fr.s).Value());
    if (fr.depth == max_depth) continue;
    for (const Arc &a : f.Arcs(fr.s)) {
      Frame next{a.nextstate, fr.in, fr.out, fr.w + a.weight.Value(), fr.depth + 1};
      if (a.ilabel != kEpsilon) next.in.push_back(a.ilabel);
      if (a.olabel != kEpsilon) next.out.push_back(a.olabel);
      if (next.in.size() > max_in || next.out.size() > max_out) continue;
      stack.push_back(std::move(next));
    }
  }
  return rel;
}

// Output-side language of an acceptor (or the input side when
// `input_side`), all strings up to `max_len`.
inline Language EnumerateLanguage(const Wfst &f, size_t max_len, bool input_side = false) {
  Language lang;
  for (const auto &[pair, w] : EnumerateRelation(f, input_side ? max_len : 1000,
                                                 input_side ? 1000 : max_len,
                                                 (max_len + 1) * (f.NumStates() + 1))) {
    Relax(lang, input_side ? pair.first : pair.second, w);
  }
  return lang;
}

// min over y of A(x,y) + B(y,z), with both relations already enumerated.
inline Relation ComposeRelations(const Relation &a, const Relation &b) {
  Relation out;
  std::multimap<Str, std::pair<Str, double>> b_by_input;
  for (const auto &[pair, w] : b) b_by_input.emplace(pair.first, std::make_pair(pair.second, w));
  for (const auto &[pair, wa] : a) {
    auto [lo, hi] = b_by_input.equal_range(pair.second);
    for (auto it = lo; it != hi; ++it) Relax(out, pair.first, it->second.first, wa + it->second.second);
  }
  return out;
}

inline Relation Restrict(const Relation &rel, size_t max_in, size_t max_out) {
  Relation out;
  for (const auto &[pair, w] : rel) {
    if (pair.first.size() <= max_in && pair.second.size() <= max_out) out.emplace(pair, w);
  }
  return out;
}

// Random transducer over labels [first, first + alphabet).
//  - consuming_input: every arc has a non-epsilon input label, so the
//    output side is no longer than the input.
//  - eps_eps arcs (both sides epsilon) only go forward, so there are no
//    epsilon cycles.
struct RandomSpec {
  int states = 4;
  int alphabet = 2;
  int arcs_per_state = 2;
  bool consuming_input = true;
  bool allow_output_eps = true;
  bool acceptor = false;
  bool acyclic = false;
  bool allow_eps_eps = false;
  double final_prob = 0.4;
};

inline Wfst RandomWfst(std::mt19937 &rng, const RandomSpec &spec, SymbolTablePtr syms = nullptr) {
  Wfst f(syms);
  f.AddStates(spec.states);
  f.SetStart(0);
  std::uniform_int_distribution<int> state(0, spec.states - 1);
  std::uniform_int_distribution<int> sym(0, spec.alphabet - 1);
  std::uniform_int_distribution<int> weight(0, 40);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto label = [&](bool allow_eps) -> Label {
    if (allow_eps && coin(rng) < 0.25) return kEpsilon;
    return kFirstUserLabel + sym(rng);
  };
  for (StateId s = 0; s < spec.states; ++s) {
    const int n = std::uniform_int_distribution<int>(0, spec.arcs_per_state)(rng);
    for (int k = 0; k < n; ++k) {
      StateId t = state(rng);
      if (spec.acyclic) {
        if (s + 1 >= spec.states) break;
        t = std::uniform_int_distribution<int>(s + 1, spec.states - 1)(rng);
      }
      Label il = label(!spec.consuming_input);
      Label ol = spec.acceptor ? il : label(spec.allow_output_eps);
      if (il == kEpsilon && ol == kEpsilon) {
        if (!spec.allow_eps_eps || t <= s) ol = kFirstUserLabel + sym(rng);
        if (spec.acceptor) il = ol;
      }
      // Quarter-unit weights keep sums exact in binary floating point.
      f.AddArc(s, {il, ol, Weight(weight(rng) * 0.25), t});
    }
    if (coin(rng) < spec.final_prob || s == spec.states - 1) {
      f.SetFinal(s, Weight(weight(rng) * 0.25));
    }
  }
  return f;
}

inline bool SameRelation(const Relation &x, const Relation &y, double tol = 1e-9) {
  if (x.size() != y.size()) return false;
  for (const auto &[pair, w] : x) {
    auto it = y.find(pair);
    if (it == y.end() || std::fabs(it->second - w) > tol) return false;
  }
  return true;
}

inline bool SameLanguage(const Language &x, const Language &y, double tol = 1e-9) {
  if (x.size() != y.size()) return false;
  for (const auto &[s, w] : x) {
    auto it = y.find(s);
    if (it == y.end() || std::fabs(it->second - w) > tol) return false;
  }
  return true;
}

// Textbook Levenshtein distance by recursion with memoization; kept apart
// from the library's iterative version.
template <typename T>
size_t LevenshteinOracle(const std::vector<T> &x, const std::vector<T> &y) {
  std::map<std::pair<size_t, size_t>, size_t> memo;
  auto rec = [&](auto &&self, size_t i, size_t j) -> size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    size_t best = std::min(self(self, i - 1, j) + 1, self(self, i, j - 1) + 1);
    best = std::min(best, self(self, i - 1, j - 1) + (x[i - 1] == y[j - 1] ? 0 : 1));
    memo[{i, j}] = best;
    return best;
  };
  return rec(rec, x.size(), y.size());
}

// Deterministic-automaton isomorphism by simultaneous traversal; arcs are
// compared as sorted lists and weights to `tol`.
inline bool Isomorphic(const Wfst &a, const Wfst &b, double tol = 1e-9) {
  if (a.NumStates() != b.NumStates()) return false;
  if (a.NumStates() == 0) return true;
  std::vector<StateId> map_ab(a.NumStates(), kNoStateId);
  std::vector<StateId> map_ba(b.NumStates(), kNoStateId);
  std::vector<std::pair<StateId, StateId>> stack{{a.Start(), b.Start()}};
  map_ab[a.Start()] = b.Start();
  map_ba[b.Start()] = a.Start();
  auto sorted = [](std::span<const Arc> arcs) {
    std::vector<Arc> v(arcs.begin(), arcs.end());
    std::sort(v.begin(), v.end(), [](const Arc &x, const Arc &y) {
      return std::tie(x.ilabel, x.olabel) < std::tie(y.ilabel, y.olabel);
    });
    return v;
  };
  while (!stack.empty()) {
    auto [p, q] = stack.back();
    stack.pop_back();
    if (!ApproxEqual(a.Final(p), b.Final(q), tol)) return false;
    const auto ap = sorted(a.Arcs(p));
    const auto bq = sorted(b.Arcs(q));
    if (ap.size() != bq.size()) return false;
    for (size_t i = 0; i < ap.size(); ++i) {
      if (ap[i].ilabel != bq[i].ilabel || ap[i].olabel != bq[i].olabel) return false;
      if (!ApproxEqual(ap[i].weight, bq[i].weight, tol)) return false;
      const StateId x = ap[i].nextstate, y = bq[i].nextstate;
      if (map_ab[x] == kNoStateId && map_ba[y] == kNoStateId) {
        map_ab[x] = y;
        map_ba[y] = x;
        stack.emplace_back(x, y);
      } else if (map_ab[x] != y || map_ba[y] != x) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace gecfst::testing

#endif  // GECFST_TESTS_ORACLES_H_
