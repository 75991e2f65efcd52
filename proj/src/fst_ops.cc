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
#include <deque>
#include <functional>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

// Copies `f` with every arc passed through `relabel`.
Wfst MapArcs(const Wfst &f, const std::function<void(Arc &)> &relabel) {
  Wfst out(f.InputSymbols(), f.OutputSymbols());
  out.SetSemantics(f.Semantics());
  out.EnableFeatures(f.NumFeatures());
  out.AddStates(f.NumStates());
  if (f.Start() != kNoStateId) out.SetStart(f.Start());
  for (StateId s = 0; s < static_cast<StateId>(f.NumStates()); ++s) {
    if (f.IsFinal(s)) out.SetFinal(s, f.Final(s), f.FinalFeatures(s));
    for (size_t i = 0; i < f.NumArcs(s); ++i) {
      Arc arc = f.GetArc(s, i);
      relabel(arc);
      out.AddArc(s, arc, f.ArcFeatures(s, i));
    }
  }
  return out;
}

}  // namespace

Wfst Project(const Wfst &f, ProjectSide side) {
  Wfst out = MapArcs(f, [side](Arc &arc) {
    if (side == ProjectSide::kInput) {
      arc.olabel = arc.ilabel;
    } else {
      arc.ilabel = arc.olabel;
    }
  });
  const SymbolTablePtr &syms =
      side == ProjectSide::kInput ? f.InputSymbols() : f.OutputSymbols();
  out.SetInputSymbols(syms);
  out.SetOutputSymbols(syms);
  return out;
}

Wfst Invert(const Wfst &f) {
  Wfst out = MapArcs(f, [](Arc &arc) { std::swap(arc.ilabel, arc.olabel); });
  out.SetInputSymbols(f.OutputSymbols());
  out.SetOutputSymbols(f.InputSymbols());
  return out;
}

Wfst Connect(const Wfst &f) {
  const auto n = static_cast<StateId>(f.NumStates());
  Wfst out(f.InputSymbols(), f.OutputSymbols());
  out.SetSemantics(f.Semantics());
  out.EnableFeatures(f.NumFeatures());
  if (f.Start() == kNoStateId) return out;

  // Forward reachability, recording first-visit order.
  std::vector<char> accessible(n, 0);
  std::vector<StateId> order;
  std::deque<StateId> queue{f.Start()};
  accessible[f.Start()] = 1;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (const Arc &arc : f.Arcs(s)) {
      if (!accessible[arc.nextstate]) {
        accessible[arc.nextstate] = 1;
        queue.push_back(arc.nextstate);
      }
    }
  }
  // Backward reachability from final states.
  std::vector<std::vector<StateId>> reverse(n);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc &arc : f.Arcs(s)) reverse[arc.nextstate].push_back(s);
  }
  std::vector<char> coaccessible(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (f.IsFinal(s)) {
      coaccessible[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (StateId p : reverse[s]) {
      if (!coaccessible[p]) {
        coaccessible[p] = 1;
        queue.push_back(p);
      }
    }
  }
  if (!coaccessible[f.Start()]) return out;

  std::vector<StateId> remap(n, kNoStateId);
  for (StateId s : order) {
    if (coaccessible[s]) remap[s] = out.AddState();
  }
  out.SetStart(remap[f.Start()]);
  for (StateId s : order) {
    if (remap[s] == kNoStateId) continue;
    if (f.IsFinal(s)) out.SetFinal(remap[s], f.Final(s), f.FinalFeatures(s));
    for (size_t i = 0; i < f.NumArcs(s); ++i) {
      Arc arc = f.GetArc(s, i);
      if (remap[arc.nextstate] == kNoStateId) continue;
      arc.nextstate = remap[arc.nextstate];
      out.AddArc(remap[s], arc, f.ArcFeatures(s, i));
    }
  }
  return out;
}

std::vector<StateId> TopologicalOrder(const Wfst &f) {
  const auto n = static_cast<StateId>(f.NumStates());
  std::vector<int> indegree(n, 0);
  for (StateId s = 0; s < n; ++s) {
    for (const Arc &arc : f.Arcs(s)) ++indegree[arc.nextstate];
  }
  std::vector<StateId> order;
  order.reserve(n);
  for (StateId s = 0; s < n; ++s) {
    if (indegree[s] == 0) order.push_back(s);
  }
  for (size_t head = 0; head < order.size(); ++head) {
    for (const Arc &arc : f.Arcs(order[head])) {
      if (--indegree[arc.nextstate] == 0) order.push_back(arc.nextstate);
    }
  }
  if (order.size() != static_cast<size_t>(n)) return {};
  return order;
}

bool IsAcyclic(const Wfst &f) {
  return f.NumStates() == 0 || !TopologicalOrder(f).empty();
}

std::vector<Weight> ShortestDistanceToFinal(const Wfst &f) {
  const auto n = static_cast<StateId>(f.NumStates());
  std::vector<Weight> dist(n, Weight::Zero());
  const std::vector<StateId> order = TopologicalOrder(f);
  if (!order.empty() || n == 0) {
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const StateId s = *it;
      Weight d = f.Final(s);
      for (const Arc &arc : f.Arcs(s)) d = Plus(d, Times(arc.weight, dist[arc.nextstate]));
      dist[s] = d;
    }
    return dist;
  }
  // Bellman-Ford on the cyclic case.
  for (StateId s = 0; s < n; ++s) dist[s] = f.Final(s);
  for (StateId round = 0; round <= n; ++round) {
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      for (const Arc &arc : f.Arcs(s)) {
        const Weight w = Times(arc.weight, dist[arc.nextstate]);
        if (NaturalLess(w, dist[s])) {
          dist[s] = w;
          changed = true;
        }
      }
    }
    if (!changed) return dist;
  }
  throw UnsupportedError("ShortestDistance: negative-weight cycle");
}

Weight ShortestDistance(const Wfst &f) {
  if (f.Start() == kNoStateId) return Weight::Zero();
  return ShortestDistanceToFinal(f)[f.Start()];
}

Weight StringWeight(const Wfst &f, std::span<const Label> labels) {
  if (f.Start() == kNoStateId) return Weight::Zero();
  for (Label l : labels) {
    if (l < 0) return Weight::Zero();
  }
  const Wfst linear = BuildLinear(labels, Weight::One(), f.InputSymbols());
  return ShortestDistance(Compose(linear, f));
}

Weight StringWeight(const Wfst &f, const std::vector<std::string> &tokens) {
  std::vector<Label> labels;
  labels.reserve(tokens.size());
  const SymbolTable *syms = f.InputSymbols().get();
  if (syms == nullptr) throw ConfigError("StringWeight: machine has no input symbols");
  for (const std::string &t : tokens) {
    const Label l = syms->Find(t);
    if (l == kNoLabel) return Weight::Zero();
    labels.push_back(l);
  }
  return StringWeight(f, labels);
}

Wfst BuildLinear(std::span<const Label> labels, Weight weight, SymbolTablePtr symbols) {
  Wfst out(std::move(symbols));
  StateId s = out.AddState();
  out.SetStart(s);
  if (labels.empty()) {
    out.SetFinal(s, weight);
    return out;
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    const StateId next = out.AddState();
    out.AddArc(s, {labels[i], labels[i], i == 0 ? weight : Weight::One(), next});
    s = next;
  }
  out.SetFinal(s, Weight::One());
  return out;
}

Wfst BuildLinear(const std::vector<std::string> &tokens, Weight weight,
                 const std::shared_ptr<SymbolTable> &symbols) {
  std::vector<Label> labels;
  labels.reserve(tokens.size());
  for (const std::string &t : tokens) labels.push_back(symbols->AddSymbol(t));
  return BuildLinear(labels, weight, symbols);
}

Wfst Union(std::span<const Wfst> machines) {
  SymbolTablePtr isyms, osyms;
  int num_features = 0;
  for (const Wfst &m : machines) {
    if (!SymbolTable::Compatible(isyms.get(), m.InputSymbols().get()) ||
        !SymbolTable::Compatible(osyms.get(), m.OutputSymbols().get())) {
      throw ConfigError("Union: incompatible symbol tables");
    }
    isyms = WiderSymbols(isyms, m.InputSymbols());
    osyms = WiderSymbols(osyms, m.OutputSymbols());
    if (m.NumFeatures() != 0) {
      if (num_features != 0 && num_features != m.NumFeatures()) {
        throw ConfigError("Union: operands carry different feature lengths");
      }
      num_features = m.NumFeatures();
    }
  }
  Wfst out(isyms, osyms);
  out.EnableFeatures(num_features);
  const StateId start = out.AddState();
  out.SetStart(start);
  for (const Wfst &m : machines) {
    if (m.Start() == kNoStateId) continue;
    const auto offset = static_cast<StateId>(out.NumStates());
    out.AddStates(m.NumStates());
    for (StateId s = 0; s < static_cast<StateId>(m.NumStates()); ++s) {
      if (m.IsFinal(s)) out.SetFinal(s + offset, m.Final(s), m.FinalFeatures(s));
      for (size_t i = 0; i < m.NumArcs(s); ++i) {
        Arc arc = m.GetArc(s, i);
        arc.nextstate += offset;
        out.AddArc(s + offset, arc, m.ArcFeatures(s, i));
      }
    }
    out.AddArc(start, {kEpsilon, kEpsilon, Weight::One(), m.Start() + offset});
  }
  return out;
}

std::vector<std::string> LabelsToTokens(const Wfst &f, std::span<const Label> labels) {
  std::vector<std::string> tokens;
  tokens.reserve(labels.size());
  const SymbolTable *syms = f.OutputSymbols().get();
  for (Label l : labels) {
    tokens.push_back(syms != nullptr ? syms->Find(l) : std::to_string(l));
  }
  return tokens;
}

}  // namespace gecfst
