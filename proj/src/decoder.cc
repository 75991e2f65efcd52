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

#include "gecfst/decoder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"
#include "gecfst/subword.h"

namespace gecfst {

namespace {

using History = std::vector<NGramModel::WordId>;

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> Strip(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) {
    if (t != kCorrSymbol && t != kMcorrSymbol) out.push_back(t);
  }
  return out;
}

struct Hyp {
  StateId state;
  std::vector<std::any> scorer_states;
  std::vector<Label> labels;
  double fst_cost;
  std::vector<double> logprobs;
  double score;
};

// Higher score first, then lexicographically smaller labels.
bool Better(const Hyp &a, const Hyp &b) {
  if (a.score != b.score) return a.score > b.score;
  return a.labels < b.labels;
}

}  // namespace

std::any NGramScorer::Init() const { return History{NGramModel::kBos}; }

std::pair<std::any, double> NGramScorer::Extend(const std::any &state,
                                                const std::string &token) const {
  History h = std::any_cast<const History &>(state);
  const auto id = model_->Id(token);
  const double lp = model_->LogProb(h, id);
  h.push_back(id);
  const size_t keep = static_cast<size_t>(std::max(model_->Order() - 1, 0));
  if (h.size() > keep) h.erase(h.begin(), h.end() - static_cast<std::ptrdiff_t>(keep));
  return {std::move(h), lp};
}

double NGramScorer::Finish(const std::any &state) const {
  return model_->LogProb(std::any_cast<const History &>(state), NGramModel::kEos);
}

ReplayScorer ReplayScorer::Read(std::istream &is, double missing) {
  std::map<std::string, double> scores;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const auto bar = line.rfind("|||");
    if (bar == std::string::npos) throw ParseError("expected 'prefix ||| logprob'", lineno);
    std::istringstream prefix(line.substr(0, bar));
    std::string key;
    for (std::string t; prefix >> t;) key += (key.empty() ? "" : " ") + t;
    const std::string value = Trim(line.substr(bar + 3));
    char *end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ParseError("bad log-probability", lineno);
    scores[key] = v;
  }
  return ReplayScorer(std::move(scores), missing);
}

ReplayScorer ReplayScorer::ReadFile(const std::string &path, double missing) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return Read(in, missing);
}

double ReplayScorer::Lookup(const std::string &key) const {
  auto it = scores_.find(key);
  return it == scores_.end() ? missing_ : it->second;
}

std::pair<std::any, double> ReplayScorer::Extend(const std::any &state,
                                                 const std::string &token) const {
  const auto &prefix = std::any_cast<const std::string &>(state);
  std::string key = prefix.empty() ? token : prefix + " " + token;
  const double lp = Lookup(key);
  return {std::move(key), lp};
}

double ReplayScorer::Finish(const std::any &state) const {
  const auto &prefix = std::any_cast<const std::string &>(state);
  return Lookup(prefix.empty() ? std::string(kEosSymbol) : prefix + " " + kEosSymbol);
}

DecodeResult BeamDecode(const Wfst &h, std::span<const WeightedScorer> scorers,
                        const BeamOptions &opts) {
  if (opts.beam == 0) throw ConfigError("beam width must be at least 1");
  if (h.Start() == kNoStateId) throw DecodeError("empty lattice");
  const SymbolTablePtr &syms = h.OutputSymbols();
  auto text = [&](Label l) { return syms ? syms->Find(l) : std::to_string(l); };
  const size_t n = scorers.size();

  Hyp init{h.Start(), {}, {}, 0.0, std::vector<double>(n, 0.0), 0.0};
  for (const auto &s : scorers) init.scorer_states.push_back(s.scorer->Init());
  std::vector<Hyp> beam{std::move(init)};
  std::vector<Hyp> done;
  const size_t max_steps = opts.max_steps ? opts.max_steps : h.NumStates();

  for (size_t step = 0; !beam.empty() && step <= max_steps; ++step) {
    if (opts.trace) {
      *opts.trace << "step " << step << "\n";
      for (size_t r = 0; r < beam.size(); ++r) {
        *opts.trace << "  " << r << "\t" << beam[r].score << "\t" << beam[r].fst_cost << "\t";
        for (size_t i = 0; i < beam[r].labels.size(); ++i) {
          *opts.trace << (i ? " " : "") << text(beam[r].labels[i]);
        }
        *opts.trace << "\n";
      }
    }
    std::vector<Hyp> next;
    for (const Hyp &hyp : beam) {
      if (h.IsFinal(hyp.state)) {
        Hyp fin = hyp;
        fin.fst_cost += h.Final(hyp.state).Value();
        fin.score = -fin.fst_cost;
        for (size_t i = 0; i < n; ++i) {
          fin.logprobs[i] += scorers[i].scorer->Finish(hyp.scorer_states[i]);
          fin.score += scorers[i].lambda * fin.logprobs[i];
        }
        done.push_back(std::move(fin));
      }
      for (const Arc &arc : h.Arcs(hyp.state)) {
        Hyp ext{arc.nextstate, hyp.scorer_states, hyp.labels, hyp.fst_cost + arc.weight.Value(),
                hyp.logprobs, 0.0};
        if (arc.olabel != kEpsilon) {
          ext.labels.push_back(arc.olabel);
          if (!IsCorrectionLabel(arc.olabel)) {
            const std::string tok = text(arc.olabel);
            for (size_t i = 0; i < n; ++i) {
              auto [st, lp] = scorers[i].scorer->Extend(hyp.scorer_states[i], tok);
              ext.scorer_states[i] = std::move(st);
              ext.logprobs[i] += lp;
            }
          }
        }
        ext.score = -ext.fst_cost;
        for (size_t i = 0; i < n; ++i) ext.score += scorers[i].lambda * ext.logprobs[i];
        next.push_back(std::move(ext));
      }
    }
    if (next.size() > opts.beam) {
      std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(opts.beam),
                        next.end(), Better);
      next.resize(opts.beam);
    } else {
      std::sort(next.begin(), next.end(), Better);
    }
    beam = std::move(next);
  }
  if (done.empty()) throw DecodeError("no hypothesis reached a final state");
  const Hyp &best = *std::min_element(done.begin(), done.end(), Better);

  DecodeResult r;
  for (Label l : best.labels) r.tokens.push_back(text(l));
  r.words = Desegment(Strip(r.tokens));
  r.fst_cost = best.fst_cost;
  r.scorer_logprobs = best.logprobs;
  r.score = best.score;
  if (opts.trace) {
    *opts.trace << "best\t" << r.score << "\t";
    for (size_t i = 0; i < r.tokens.size(); ++i) *opts.trace << (i ? " " : "") << r.tokens[i];
    *opts.trace << "\n";
  }
  return r;
}

DecodeResult ExactDecode(const Wfst &hword) {
  const auto paths = ShortestPath(hword, 1);
  if (paths.empty()) throw DecodeError("empty lattice");
  DecodeResult r;
  r.tokens = LabelsToTokens(hword, paths[0].labels);
  r.words = Strip(r.tokens);
  r.fst_cost = paths[0].weight.Value();
  r.score = -r.fst_cost;
  return r;
}

}  // namespace gecfst
