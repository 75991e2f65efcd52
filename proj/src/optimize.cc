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

// Epsilon removal, determinization, weight pushing and minimization. These
// passes drop any feature annotation: re-weight first, then optimize.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

bool IsEpsilonArc(const Arc &arc) { return arc.ilabel == kEpsilon && arc.olabel == kEpsilon; }

Wfst EmptyLike(const Wfst &f) {
  Wfst out(f.InputSymbols(), f.OutputSymbols());
  out.SetSemantics(f.Semantics());
  return out;
}

// Shortest distances from `source` along epsilon arcs only.
std::vector<std::pair<StateId, Weight>> EpsilonClosure(const Wfst &f, StateId source) {
  std::unordered_map<StateId, Weight> dist{{source, Weight::One()}};
  std::unordered_map<StateId, size_t> relaxations;
  std::deque<StateId> queue{source};
  const size_t limit = f.NumStates() + 1;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    const Weight ds = dist[s];
    for (const Arc &arc : f.Arcs(s)) {
      if (!IsEpsilonArc(arc)) continue;
      const Weight w = Times(ds, arc.weight);
      auto it = dist.find(arc.nextstate);
      if (it == dist.end() || NaturalLess(w, it->second)) {
        dist[arc.nextstate] = w;
        if (++relaxations[arc.nextstate] > limit) {
          throw UnsupportedError("RemoveEpsilon: negative-weight epsilon cycle");
        }
        queue.push_back(arc.nextstate);
      }
    }
  }
  std::vector<std::pair<StateId, Weight>> closure(dist.begin(), dist.end());
  std::sort(closure.begin(), closure.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });
  return closure;
}

int64_t Quantize(Weight w) {
  if (w.IsZero()) return std::numeric_limits<int64_t>::max();
  return std::llround(w.Value() * 1e10);
}

}  // namespace

Wfst RemoveEpsilon(const Wfst &f) {
  Wfst out = EmptyLike(f);
  out.AddStates(f.NumStates());
  if (f.Start() == kNoStateId) return out;
  out.SetStart(f.Start());
  for (StateId s = 0; s < static_cast<StateId>(f.NumStates()); ++s) {
    Weight final = Weight::Zero();
    for (const auto &[q, d] : EpsilonClosure(f, s)) {
      final = Plus(final, Times(d, f.Final(q)));
      for (const Arc &arc : f.Arcs(q)) {
        if (IsEpsilonArc(arc)) continue;
        out.AddArc(s, {arc.ilabel, arc.olabel, Times(d, arc.weight), arc.nextstate});
      }
    }
    if (!final.IsZero()) out.SetFinal(s, final);
  }
  return Connect(out);
}

Wfst Determinize(const Wfst &f) {
  if (!f.IsAcceptor()) throw ConfigError("Determinize: input must be an acceptor");
  if (!IsAcyclic(f)) throw UnsupportedError("Determinize: cyclic input is not supported");
  Wfst in = RemoveEpsilon(f);
  Wfst out = EmptyLike(f);
  if (in.Start() == kNoStateId || in.NumStates() == 0) return out;

  // A weighted subset: (state, residual weight), sorted by state.
  using Subset = std::vector<std::pair<StateId, double>>;
  std::map<Subset, StateId> ids;
  std::deque<Subset> queue;
  auto lookup = [&](Subset subset) {
    auto [it, inserted] = ids.try_emplace(subset, kNoStateId);
    if (inserted) {
      it->second = out.AddState();
      queue.push_back(std::move(subset));
    }
    return it->second;
  };
  out.SetStart(lookup({{in.Start(), 0.0}}));
  while (!queue.empty()) {
    const Subset subset = std::move(queue.front());
    queue.pop_front();
    const StateId s = ids.at(subset);
    Weight final = Weight::Zero();
    // label -> destination state -> best residual-adjusted weight
    std::map<Label, std::map<StateId, double>> moves;
    for (const auto &[q, r] : subset) {
      final = Plus(final, Times(Weight(r), in.Final(q)));
      for (const Arc &arc : in.Arcs(q)) {
        const double w = r + arc.weight.Value();
        auto [it, inserted] = moves[arc.ilabel].try_emplace(arc.nextstate, w);
        if (!inserted && w < it->second) it->second = w;
      }
    }
    if (!final.IsZero()) out.SetFinal(s, final);
    for (auto &[label, dests] : moves) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &[q, w] : dests) best = std::min(best, w);
      Subset next;
      next.reserve(dests.size());
      for (const auto &[q, w] : dests) next.emplace_back(q, w - best);
      const StateId t = lookup(std::move(next));
      out.AddArc(s, {label, label, Weight(best), t});
    }
  }
  return out;
}

Wfst PushWeights(const Wfst &f) {
  const Wfst in = Connect(DropFeatures(f));
  Wfst out = EmptyLike(f);
  if (in.Start() == kNoStateId) return out;
  const std::vector<Weight> dist = ShortestDistanceToFinal(in);
  const auto n = static_cast<StateId>(in.NumStates());
  out.AddStates(n);
  for (StateId s = 0; s < n; ++s) {
    if (in.IsFinal(s)) out.SetFinal(s, Divide(in.Final(s), dist[s]));
    for (const Arc &arc : in.Arcs(s)) {
      out.AddArc(s, {arc.ilabel, arc.olabel,
                     Divide(Times(arc.weight, dist[arc.nextstate]), dist[s]), arc.nextstate});
    }
  }
  const Weight initial = dist[in.Start()];
  bool start_has_incoming = false;
  for (StateId s = 0; s < n && !start_has_incoming; ++s) {
    for (const Arc &arc : in.Arcs(s)) {
      if (arc.nextstate == in.Start()) {
        start_has_incoming = true;
        break;
      }
    }
  }
  // Fold the initial weight into a start state with no incoming arcs.
  StateId start = in.Start();
  if (start_has_incoming) {
    start = out.AddState();
    if (out.IsFinal(in.Start())) out.SetFinal(start, out.Final(in.Start()));
    for (const Arc &arc : std::vector<Arc>(out.Arcs(in.Start()).begin(),
                                           out.Arcs(in.Start()).end())) {
      out.AddArc(start, arc);
    }
  }
  Wfst result = EmptyLike(f);
  result.AddStates(out.NumStates());
  result.SetStart(start);
  for (StateId s = 0; s < static_cast<StateId>(out.NumStates()); ++s) {
    const Weight lead = s == start ? initial : Weight::One();
    if (out.IsFinal(s)) result.SetFinal(s, Times(lead, out.Final(s)));
    for (const Arc &arc : out.Arcs(s)) {
      result.AddArc(s, {arc.ilabel, arc.olabel, Times(lead, arc.weight), arc.nextstate});
    }
  }
  return Connect(result);
}

Wfst Minimize(const Wfst &f) {
  if (!f.IsAcceptor()) throw ConfigError("Minimize: input must be an acceptor");
  const Wfst in = PushWeights(f);
  const auto n = static_cast<StateId>(in.NumStates());
  if (n == 0) return in;

  // Moore refinement: states are equivalent when their final weights agree
  // and their (label, weight, class of destination) sets agree.
  std::vector<int> cls(n, 0);
  int num_classes = 0;
  using Signature = std::tuple<int, int64_t, std::vector<std::tuple<Label, int64_t, int>>>;
  for (;;) {
    std::map<Signature, int> classes;
    std::vector<int> next(n);
    for (StateId s = 0; s < n; ++s) {
      std::vector<std::tuple<Label, int64_t, int>> moves;
      for (const Arc &arc : in.Arcs(s)) {
        moves.emplace_back(arc.ilabel, Quantize(arc.weight), cls[arc.nextstate]);
      }
      std::sort(moves.begin(), moves.end());
      moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
      Signature sig{cls[s], Quantize(in.Final(s)), std::move(moves)};
      auto [it, inserted] = classes.try_emplace(std::move(sig), static_cast<int>(classes.size()));
      next[s] = it->second;
    }
    const int count = static_cast<int>(classes.size());
    cls = std::move(next);
    if (count == num_classes) break;
    num_classes = count;
  }

  // Renumber classes in order of first visit from the start state so the
  // result does not depend on map ordering.
  std::vector<StateId> class_state(num_classes, kNoStateId);
  std::vector<StateId> representative(num_classes, kNoStateId);
  for (StateId s = 0; s < n; ++s) {
    if (representative[cls[s]] == kNoStateId) representative[cls[s]] = s;
  }
  Wfst out = EmptyLike(f);
  std::deque<int> queue;
  auto visit = [&](int c) {
    if (class_state[c] == kNoStateId) {
      class_state[c] = out.AddState();
      queue.push_back(c);
    }
    return class_state[c];
  };
  out.SetStart(visit(cls[in.Start()]));
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    const StateId rep = representative[c];
    const StateId s = class_state[c];
    if (in.IsFinal(rep)) out.SetFinal(s, in.Final(rep));
    std::vector<std::tuple<Label, int64_t, int>> seen;
    for (const Arc &arc : in.Arcs(rep)) {
      std::tuple<Label, int64_t, int> key{arc.ilabel, Quantize(arc.weight), cls[arc.nextstate]};
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      out.AddArc(s, {arc.ilabel, arc.olabel, arc.weight, visit(cls[arc.nextstate])});
    }
  }
  return out;
}

Wfst Optimize(const Wfst &f, const OptimizeOptions &opts) {
  Wfst out = Connect(DropFeatures(f));
  if (opts.eps_remove) out = RemoveEpsilon(out);
  if (opts.determinize) out = Determinize(out);
  if (opts.push) out = PushWeights(out);
  if (opts.minimize) out = Minimize(out);
  return out;
}

}  // namespace gecfst
