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
#include <unordered_map>
#include <vector>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

// Filter states of the epsilon-sequencing filter: 0 after a matched move (or
// at the start), 1 after a left-only epsilon move, 2 after a right-only one.
struct Tuple {
  StateId a;
  StateId b;
  int filter;

  friend bool operator==(const Tuple &, const Tuple &) = default;
};

struct TupleHash {
  size_t operator()(const Tuple &t) const {
    size_t h = static_cast<size_t>(t.a) * 7853;
    h ^= static_cast<size_t>(t.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h * 3 + static_cast<size_t>(t.filter);
  }
};

// A way for the right operand to consume one concrete symbol, possibly after
// following failure arcs.
struct RightMatch {
  Label olabel;
  Weight weight;
  std::vector<double> features;
  StateId next;
};

// Per-state view of the right operand's arcs, grouped by input label.
struct RightState {
  std::vector<size_t> by_label;  // arc indices sorted by (ilabel, index)
  std::vector<size_t> sigma;
  std::vector<size_t> phi;
  std::vector<size_t> epsilon;
};

class Composer {
 public:
  Composer(const Wfst &a, const Wfst &b) : a_(a), b_(b) {
    num_features_ = std::max(a.NumFeatures(), b.NumFeatures());
    if (a.NumFeatures() != 0 && b.NumFeatures() != 0 && a.NumFeatures() != b.NumFeatures()) {
      throw ConfigError("Compose: operands carry different feature lengths");
    }
    Index();
  }

  Wfst Run() {
    Wfst out(WiderSymbols(a_.InputSymbols(), b_.InputSymbols()),
             WiderSymbols(b_.OutputSymbols(), a_.OutputSymbols()));
    out.EnableFeatures(num_features_);
    if (a_.Start() == kNoStateId || b_.Start() == kNoStateId) return out;
    out.SetStart(Lookup(out, {a_.Start(), b_.Start(), 0}));
    std::vector<double> scratch(num_features_);
    while (!queue_.empty()) {
      const Tuple t = queue_.front();
      queue_.pop_front();
      const StateId s = ids_.at(t);
      Expand(out, s, t, scratch);
    }
    return Connect(out);
  }

 private:
  void Index() {
    right_.resize(b_.NumStates());
    for (StateId q = 0; q < static_cast<StateId>(b_.NumStates()); ++q) {
      RightState &rs = right_[q];
      const auto arcs = b_.Arcs(q);
      for (size_t i = 0; i < arcs.size(); ++i) {
        const Label l = arcs[i].ilabel;
        if (l == kEpsilon) {
          rs.epsilon.push_back(i);
        } else if (l == kSigma) {
          rs.sigma.push_back(i);
        } else if (l == kPhi) {
          rs.phi.push_back(i);
        } else {
          rs.by_label.push_back(i);
          if (static_cast<size_t>(l) >= alphabet_.size()) alphabet_.resize(l + 1, false);
          alphabet_[l] = true;
        }
      }
      std::stable_sort(rs.by_label.begin(), rs.by_label.end(), [&](size_t x, size_t y) {
        return arcs[x].ilabel < arcs[y].ilabel;
      });
    }
  }

  bool InAlphabet(Label l) const {
    return static_cast<size_t>(l) < alphabet_.size() && alphabet_[l];
  }

  StateId Lookup(Wfst &out, const Tuple &t) {
    auto [it, inserted] = ids_.try_emplace(t, kNoStateId);
    if (inserted) {
      it->second = out.AddState();
      queue_.push_back(t);
    }
    return it->second;
  }

  void AddFeatures(std::vector<double> &acc, std::span<const double> f) const {
    for (size_t i = 0; i < f.size(); ++i) acc[i] += f[i];
  }

  // Indices of the arcs at `rs` whose input label is `label`.
  static std::pair<std::vector<size_t>::const_iterator, std::vector<size_t>::const_iterator>
  LabelRange(const RightState &rs, std::span<const Arc> arcs, Label label) {
    auto lo = std::partition_point(rs.by_label.begin(), rs.by_label.end(),
                                   [&](size_t i) { return arcs[i].ilabel < label; });
    auto hi = std::partition_point(lo, rs.by_label.end(),
                                   [&](size_t i) { return arcs[i].ilabel == label; });
    return {lo, hi};
  }

  // Appends every way state `q` of the right operand can consume `y`.
  void MatchRight(StateId q, Label y, Weight acc, const std::vector<double> &acc_features,
                  size_t depth, std::vector<RightMatch> &out) const {
    const RightState &rs = right_[q];
    const auto arcs = b_.Arcs(q);
    bool explicit_match = false;
    auto emit = [&](size_t i, Label rewrite_from) {
      const Arc &arc = arcs[i];
      RightMatch m{arc.olabel == rewrite_from ? y : arc.olabel, Times(acc, arc.weight),
                   acc_features, arc.nextstate};
      if (num_features_ > 0) AddFeatures(m.features, b_.ArcFeatures(q, i));
      out.push_back(std::move(m));
    };
    const auto range = LabelRange(rs, arcs, y);
    for (auto it = range.first; it != range.second; ++it) {
      emit(*it, kNoLabel);
      explicit_match = true;
    }
    if (b_.Semantics().unk_matches_oov && y != kUnk && !InAlphabet(y)) {
      const auto unk = LabelRange(rs, arcs, kUnk);
      for (auto it = unk.first; it != unk.second; ++it) {
        emit(*it, kUnk);
        explicit_match = true;
      }
    }
    for (size_t i : rs.sigma) {
      emit(i, kSigma);
      explicit_match = true;
    }
    if (explicit_match || rs.phi.empty()) return;
    if (b_.Semantics().phi == PhiMode::kRest) {
      for (size_t i : rs.phi) emit(i, kPhi);
      return;
    }
    if (depth > b_.NumStates()) throw UnsupportedError("Compose: failure-arc cycle");
    for (size_t i : rs.phi) {
      const Arc &arc = arcs[i];
      std::vector<double> f = acc_features;
      if (num_features_ > 0) AddFeatures(f, b_.ArcFeatures(q, i));
      MatchRight(arc.nextstate, y, Times(acc, arc.weight), f, depth + 1, out);
    }
  }

  // Final weight of a right-operand state, following failure arcs when the
  // state itself is not final.
  Weight RightFinal(StateId q, std::vector<double> &features, size_t depth) const {
    if (num_features_ > 0) std::fill(features.begin(), features.end(), 0.0);
    if (b_.IsFinal(q)) {
      if (num_features_ > 0) AddFeatures(features, b_.FinalFeatures(q));
      return b_.Final(q);
    }
    if (b_.Semantics().phi != PhiMode::kFailure) return Weight::Zero();
    if (depth > b_.NumStates()) throw UnsupportedError("Compose: failure-arc cycle");
    Weight best = Weight::Zero();
    std::vector<double> sub(features.size());
    for (size_t i : right_[q].phi) {
      const Arc &arc = b_.GetArc(q, i);
      const Weight w = Times(arc.weight, RightFinal(arc.nextstate, sub, depth + 1));
      if (NaturalLess(w, best)) {
        best = w;
        if (num_features_ > 0) {
          std::copy(sub.begin(), sub.end(), features.begin());
          AddFeatures(features, b_.ArcFeatures(q, i));
        }
      }
    }
    return best;
  }

  void Expand(Wfst &out, StateId s, const Tuple &t, std::vector<double> &scratch) {
    if (a_.IsFinal(t.a)) {
      std::vector<double> bf(num_features_);
      const Weight wb = RightFinal(t.b, bf, 0);
      if (!wb.IsZero()) {
        std::fill(scratch.begin(), scratch.end(), 0.0);
        AddFeatures(scratch, a_.FinalFeatures(t.a));
        AddFeatures(scratch, bf);
        out.SetFinal(s, Times(a_.Final(t.a), wb), scratch);
      }
    }
    const auto a_arcs = a_.Arcs(t.a);
    std::vector<RightMatch> matches;
    for (size_t i = 0; i < a_arcs.size(); ++i) {
      const Arc &ea = a_arcs[i];
      std::vector<double> af(num_features_, 0.0);
      if (num_features_ > 0) AddFeatures(af, a_.ArcFeatures(t.a, i));
      if (ea.olabel == kEpsilon) {
        if (t.filter != 2) {
          const StateId next = Lookup(out, {ea.nextstate, t.b, 1});
          out.AddArc(s, {ea.ilabel, kEpsilon, ea.weight, next}, af);
        }
        // Simultaneous epsilon moves on both sides.
        if (t.filter == 0) {
          for (size_t j : right_[t.b].epsilon) {
            const Arc &eb = b_.GetArc(t.b, j);
            std::vector<double> f = af;
            if (num_features_ > 0) AddFeatures(f, b_.ArcFeatures(t.b, j));
            const StateId next = Lookup(out, {ea.nextstate, eb.nextstate, 0});
            out.AddArc(s, {ea.ilabel, eb.olabel, Times(ea.weight, eb.weight), next}, f);
          }
        }
        continue;
      }
      matches.clear();
      MatchRight(t.b, ea.olabel, ea.weight, af, 0, matches);
      for (RightMatch &m : matches) {
        const StateId next = Lookup(out, {ea.nextstate, m.next, 0});
        out.AddArc(s, {ea.ilabel, m.olabel, m.weight, next}, m.features);
      }
    }
    if (t.filter != 1) {
      for (size_t j : right_[t.b].epsilon) {
        const Arc &eb = b_.GetArc(t.b, j);
        const StateId next = Lookup(out, {t.a, eb.nextstate, 2});
        out.AddArc(s, {kEpsilon, eb.olabel, eb.weight, next}, b_.ArcFeatures(t.b, j));
      }
    }
  }

  const Wfst &a_;
  const Wfst &b_;
  int num_features_ = 0;
  std::vector<RightState> right_;
  std::vector<bool> alphabet_;
  std::unordered_map<Tuple, StateId, TupleHash> ids_;
  std::deque<Tuple> queue_;
};

}  // namespace

Wfst Compose(const Wfst &a, const Wfst &b) {
  if (!SymbolTable::Compatible(a.OutputSymbols().get(), b.InputSymbols().get())) {
    throw ConfigError("Compose: output symbols of the left operand do not match input "
                      "symbols of the right operand");
  }
  const bool left_special = a.HasSpecialLabels(/*input_side=*/false);
  const bool right_special = b.HasSpecialLabels(/*input_side=*/true);
  if (left_special && right_special) {
    throw UnsupportedError("Compose: both operands carry sigma/phi labels at the matching site");
  }
  if (left_special) return Invert(Composer(Invert(b), Invert(a)).Run());
  return Composer(a, b).Run();
}

}  // namespace gecfst
