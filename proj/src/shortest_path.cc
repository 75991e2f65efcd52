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

#include <queue>
#include <set>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

// A* item. `priority` is the prefix cost plus the exact best completion
// cost, so the first time a complete string is popped it carries its
// minimum weight.
struct Item {
  double priority;
  bool complete;
  std::vector<Label> labels;
  StateId state;
  double cost;
};

// Min-heap order: lower priority first; at equal priority partial items
// before complete ones, so that every equal-cost completion is generated
// before any is emitted; then lexicographic labels.
struct ItemAfter {
  bool operator()(const Item &x, const Item &y) const {
    if (x.priority != y.priority) return x.priority > y.priority;
    if (x.complete != y.complete) return x.complete;
    if (x.labels != y.labels) return x.labels > y.labels;
    return x.state > y.state;
  }
};

}  // namespace

std::vector<Path> ShortestPath(const Wfst &f, size_t n) {
  std::vector<Path> result;
  if (n == 0 || f.Start() == kNoStateId) return result;
  const std::vector<Weight> completion = ShortestDistanceToFinal(f);
  if (completion[f.Start()].IsZero()) return result;

  std::priority_queue<Item, std::vector<Item>, ItemAfter> heap;
  std::set<std::pair<StateId, std::vector<Label>>> expanded;
  std::set<std::vector<Label>> emitted;
  heap.push({completion[f.Start()].Value(), false, {}, f.Start(), 0.0});
  while (!heap.empty() && result.size() < n) {
    Item item = heap.top();
    heap.pop();
    if (item.complete) {
      if (emitted.insert(item.labels).second) {
        result.push_back({std::move(item.labels), Weight(item.cost)});
      }
      continue;
    }
    if (!expanded.emplace(item.state, item.labels).second) continue;
    if (f.IsFinal(item.state) && !emitted.contains(item.labels)) {
      const double cost = item.cost + f.Final(item.state).Value();
      heap.push({cost, true, item.labels, kNoStateId, cost});
    }
    for (const Arc &arc : f.Arcs(item.state)) {
      const Weight rest = completion[arc.nextstate];
      if (rest.IsZero()) continue;
      Item next{0.0, false, item.labels, arc.nextstate, item.cost + arc.weight.Value()};
      if (arc.olabel != kEpsilon) next.labels.push_back(arc.olabel);
      next.priority = next.cost + rest.Value();
      heap.push(std::move(next));
    }
  }
  return result;
}

}  // namespace gecfst
