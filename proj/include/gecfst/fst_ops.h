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

// Algorithms over Wfst. None of them modify their arguments.

#ifndef GECFST_FST_OPS_H_
#define GECFST_FST_OPS_H_

#include <span>
#include <string>
#include <vector>

#include "gecfst/wfst.h"

namespace gecfst {

// Relational composition. Sigma and phi labels may sit on the output side of
// `a` or the input side of `b`, not both. A matched sigma/phi (or an <unk>
// matching an out-of-vocabulary symbol) is rewritten to the concrete symbol
// on the other tape of the same arc. Phi arcs follow the owning machine's
// MatchSemantics. Uses the three-state epsilon filter, so each pair of
// successful paths is produced once. The result is trimmed.
//
// Throws ConfigError when a's output symbols and b's input symbols are
// incompatible, UnsupportedError when both operands carry sigma/phi at the
// matching site.
Wfst Compose(const Wfst &a, const Wfst &b);

enum class ProjectSide { kInput, kOutput };
Wfst Project(const Wfst &f, ProjectSide side);

// Swaps input and output labels.
Wfst Invert(const Wfst &f);

// Removes states that are not on some start-to-final path and renumbers the
// rest in order of first visit.
Wfst Connect(const Wfst &f);

bool IsAcyclic(const Wfst &f);

// Topological order of all states; empty if the machine has a cycle.
std::vector<StateId> TopologicalOrder(const Wfst &f);

// Shortest distance from every state to a final state (Zero when none is
// reachable). Throws UnsupportedError on a negative-weight cycle.
std::vector<Weight> ShortestDistanceToFinal(const Wfst &f);

// Min over every path, start to final.
Weight ShortestDistance(const Wfst &f);

struct OptimizeOptions {
  bool eps_remove = true;
  bool determinize = true;
  bool minimize = true;
  bool push = true;
};

// Removes epsilon:epsilon arcs.
Wfst RemoveEpsilon(const Wfst &f);

// Weighted subset construction. Requires an epsilon-free, acyclic acceptor:
// ConfigError for a transducer, UnsupportedError for a cyclic input.
// Outgoing arcs of each result state are ordered by label.
Wfst Determinize(const Wfst &f);

// Moves weight toward the start state so that every state's best completion
// costs 0; total path weights are unchanged.
Wfst PushWeights(const Wfst &f);

// Pushes, then merges equivalent states. Requires an acceptor.
Wfst Minimize(const Wfst &f);

// Applies the selected passes in the order eps_remove, determinize, push,
// minimize. The weighted language is preserved.
Wfst Optimize(const Wfst &f, const OptimizeOptions &opts = {});

struct Path {
  std::vector<Label> labels;  // output side, epsilons removed
  Weight weight;

  friend bool operator==(const Path &, const Path &) = default;
};

// The `n` lowest-cost distinct output strings in nondecreasing cost order,
// ties broken by lexicographic label order. Requires every cycle to have
// positive weight. Empty for an empty language.
std::vector<Path> ShortestPath(const Wfst &f, size_t n = 1);

// Min cost over accepting paths whose input side spells `labels`.
Weight StringWeight(const Wfst &f, std::span<const Label> labels);
// Tokens are looked up in the input symbol table; an unknown token yields
// Zero.
Weight StringWeight(const Wfst &f, const std::vector<std::string> &tokens);

// Acceptor of exactly `labels`; the weight sits on the first arc (on the
// final weight for the empty sequence).
Wfst BuildLinear(std::span<const Label> labels, Weight weight, SymbolTablePtr symbols);
// Adds missing tokens to `symbols`.
Wfst BuildLinear(const std::vector<std::string> &tokens, Weight weight,
                 const std::shared_ptr<SymbolTable> &symbols);

// Union through epsilon arcs from a fresh start state. Symbol tables must be
// compatible.
Wfst Union(std::span<const Wfst> machines);

// Converts labels to text with the machine's output symbols.
std::vector<std::string> LabelsToTokens(const Wfst &f, std::span<const Label> labels);

}  // namespace gecfst

#endif  // GECFST_FST_OPS_H_
