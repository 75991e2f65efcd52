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

#include "gecfst/wfst.h"

#include <algorithm>
#include <cassert>
#include <string>

#include "gecfst/error.h"

namespace gecfst {

StateId Wfst::AddState() {
  states_.emplace_back();
  if (num_features_ > 0) states_.back().final_features.assign(num_features_, 0.0);
  return static_cast<StateId>(states_.size() - 1);
}

void Wfst::AddStates(size_t n) {
  for (size_t i = 0; i < n; ++i) AddState();
}

void Wfst::SetStart(StateId s) {
  if (!ValidState(s)) throw ConfigError("SetStart: invalid state " + std::to_string(s));
  start_ = s;
}

void Wfst::SetFinal(StateId s, Weight w, std::span<const double> features) {
  if (!ValidState(s)) throw ConfigError("SetFinal: invalid state " + std::to_string(s));
  State &st = states_[s];
  st.final = w;
  if (num_features_ > 0) {
    if (features.empty()) {
      std::fill(st.final_features.begin(), st.final_features.end(), 0.0);
    } else {
      assert(features.size() == static_cast<size_t>(num_features_));
      std::copy(features.begin(), features.end(), st.final_features.begin());
    }
  }
}

void Wfst::AddArc(StateId s, const Arc &arc, std::span<const double> features) {
  if (!ValidState(s)) throw ConfigError("AddArc: invalid source state " + std::to_string(s));
  if (!ValidState(arc.nextstate)) {
    throw ConfigError("AddArc: invalid destination state " + std::to_string(arc.nextstate));
  }
  State &st = states_[s];
  st.arcs.push_back(arc);
  if (num_features_ > 0) {
    if (features.empty()) {
      st.arc_features.insert(st.arc_features.end(), num_features_, 0.0);
    } else {
      assert(features.size() == static_cast<size_t>(num_features_));
      st.arc_features.insert(st.arc_features.end(), features.begin(), features.end());
    }
  }
}

void Wfst::EnableFeatures(int k) {
  if (k <= 0 || num_features_ == k) return;
  if (num_features_ != 0) throw ConfigError("feature annotation already enabled");
  num_features_ = k;
  for (State &st : states_) {
    st.arc_features.assign(st.arcs.size() * k, 0.0);
    st.final_features.assign(k, 0.0);
  }
}

size_t Wfst::NumArcs() const {
  size_t n = 0;
  for (const State &st : states_) n += st.arcs.size();
  return n;
}

std::span<const double> Wfst::ArcFeatures(StateId s, size_t i) const {
  if (num_features_ == 0) return {};
  return std::span<const double>(states_[s].arc_features).subspan(i * num_features_,
                                                                  num_features_);
}

std::span<const double> Wfst::FinalFeatures(StateId s) const {
  if (num_features_ == 0) return {};
  return states_[s].final_features;
}

bool Wfst::IsAcceptor() const {
  for (const State &st : states_) {
    for (const Arc &a : st.arcs) {
      if (a.ilabel != a.olabel) return false;
    }
  }
  return true;
}

bool Wfst::HasSpecialLabels(bool input_side) const {
  for (const State &st : states_) {
    for (const Arc &a : st.arcs) {
      const Label l = input_side ? a.ilabel : a.olabel;
      if (l == kSigma || l == kPhi) return true;
    }
  }
  return false;
}

namespace {

double Dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] != 0.0) sum += x[i] * y[i];
  }
  return sum;
}

Wfst CopyWith(const Wfst &f, bool reweight, std::span<const double> scales) {
  Wfst out(f.InputSymbols(), f.OutputSymbols());
  out.SetSemantics(f.Semantics());
  out.AddStates(f.NumStates());
  if (f.Start() != kNoStateId) out.SetStart(f.Start());
  for (StateId s = 0; s < static_cast<StateId>(f.NumStates()); ++s) {
    if (f.IsFinal(s)) {
      out.SetFinal(s, reweight ? Weight(Dot(scales, f.FinalFeatures(s))) : f.Final(s));
    }
    for (size_t i = 0; i < f.NumArcs(s); ++i) {
      Arc arc = f.GetArc(s, i);
      if (reweight) arc.weight = Weight(Dot(scales, f.ArcFeatures(s, i)));
      out.AddArc(s, arc);
    }
  }
  return out;
}

}  // namespace

Wfst Reweight(const Wfst &f, std::span<const double> scales) {
  if (f.NumFeatures() == 0) throw ConfigError("Reweight: machine has no feature annotation");
  if (scales.size() != static_cast<size_t>(f.NumFeatures())) {
    throw ConfigError("Reweight: expected " + std::to_string(f.NumFeatures()) + " scales");
  }
  return CopyWith(f, true, scales);
}

Wfst DropFeatures(const Wfst &f) { return CopyWith(f, false, {}); }

}  // namespace gecfst
