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

#ifndef GECFST_WFST_H_
#define GECFST_WFST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gecfst/symbol_table.h"
#include "gecfst/weight.h"

namespace gecfst {

using StateId = int32_t;
inline constexpr StateId kNoStateId = -1;

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  Weight weight = Weight::One();
  StateId nextstate = kNoStateId;

  friend bool operator==(const Arc &, const Arc &) = default;
};

// How a machine's phi arcs behave when it is matched against a concrete
// symbol during composition.
enum class PhiMode {
  kRest,     // consume the symbol when no explicit arc exists at the state
  kFailure,  // do not consume; retry the symbol at the destination state
};

struct MatchSemantics {
  PhiMode phi = PhiMode::kRest;
  // <unk> arcs also match concrete symbols that never occur as a label of
  // this machine (the n-gram acceptor's out-of-vocabulary route).
  bool unk_matches_oov = false;

  friend bool operator==(const MatchSemantics &, const MatchSemantics &) = default;
};

// Mutable-during-construction weighted transducer over the tropical semiring.
// Algorithms never modify their inputs, so a finished Wfst can be shared
// read-only across threads.
//
// An optional feature annotation attaches a fixed-length real vector to every
// arc and final weight. Composition sums the vectors of matched arcs, which
// lets a lattice be built once and re-weighted for new scale factors with
// Reweight() instead of being rebuilt.
class Wfst {
 public:
  Wfst() = default;
  explicit Wfst(SymbolTablePtr symbols) : isymbols_(symbols), osymbols_(std::move(symbols)) {}
  Wfst(SymbolTablePtr isymbols, SymbolTablePtr osymbols)
      : isymbols_(std::move(isymbols)), osymbols_(std::move(osymbols)) {}

  StateId AddState();
  void AddStates(size_t n);
  void SetStart(StateId s);
  void SetFinal(StateId s, Weight w, std::span<const double> features = {});
  void AddArc(StateId s, const Arc &arc, std::span<const double> features = {});

  // Enables the feature annotation with `k` entries per arc/final. All
  // existing arcs get zero vectors. Must be called before features are set.
  void EnableFeatures(int k);

  StateId Start() const { return start_; }
  size_t NumStates() const { return states_.size(); }
  size_t NumArcs(StateId s) const { return states_[s].arcs.size(); }
  size_t NumArcs() const;
  std::span<const Arc> Arcs(StateId s) const { return states_[s].arcs; }
  const Arc &GetArc(StateId s, size_t i) const { return states_[s].arcs[i]; }
  Weight Final(StateId s) const { return states_[s].final; }
  bool IsFinal(StateId s) const { return !states_[s].final.IsZero(); }
  bool ValidState(StateId s) const {
    return s >= 0 && static_cast<size_t>(s) < states_.size();
  }

  int NumFeatures() const { return num_features_; }
  // Empty span when features are disabled.
  std::span<const double> ArcFeatures(StateId s, size_t i) const;
  std::span<const double> FinalFeatures(StateId s) const;

  const SymbolTablePtr &InputSymbols() const { return isymbols_; }
  const SymbolTablePtr &OutputSymbols() const { return osymbols_; }
  void SetInputSymbols(SymbolTablePtr s) { isymbols_ = std::move(s); }
  void SetOutputSymbols(SymbolTablePtr s) { osymbols_ = std::move(s); }

  const MatchSemantics &Semantics() const { return semantics_; }
  void SetSemantics(const MatchSemantics &m) { semantics_ = m; }

  bool IsAcceptor() const;
  // True when some arc carries sigma or phi on the given side.
  bool HasSpecialLabels(bool input_side) const;

 private:
  struct State {
    std::vector<Arc> arcs;
    Weight final = Weight::Zero();
    std::vector<double> arc_features;  // NumArcs * num_features_
    std::vector<double> final_features;
  };

  std::vector<State> states_;
  StateId start_ = kNoStateId;
  int num_features_ = 0;
  SymbolTablePtr isymbols_;
  SymbolTablePtr osymbols_;
  MatchSemantics semantics_;
};

// Sets every arc and final weight to the dot product of its feature vector
// with `scales`, dropping the annotation. Requires features, and
// scales.size() == NumFeatures().
Wfst Reweight(const Wfst &f, std::span<const double> scales);

// Copy without the feature annotation.
Wfst DropFeatures(const Wfst &f);

}  // namespace gecfst

#endif  // GECFST_WFST_H_
