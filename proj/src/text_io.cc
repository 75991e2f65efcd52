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

#include "gecfst/text_io.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "gecfst/error.h"

namespace gecfst {

namespace {

StateId ParseState(const std::string &field, int line) {
  StateId s = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), s);
  if (ec != std::errc() || ptr != field.data() + field.size() || s < 0) {
    throw ParseError("bad state id '" + field + "'", line);
  }
  return s;
}

Label ParseLabel(const std::string &field, const SymbolTable *syms, int line) {
  if (syms != nullptr) {
    const Label l = syms->Find(field);
    if (l == kNoLabel) throw ParseError("unknown symbol '" + field + "'", line);
    return l;
  }
  Label l = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), l);
  if (ec != std::errc() || ptr != field.data() + field.size() || l < 0) {
    throw ParseError("bad label '" + field + "' (no symbol table given)", line);
  }
  return l;
}

Weight ParseWeight(const std::string &field, int line) {
  if (field == "Infinity" || field == "inf" || field == "INF") return Weight::Zero();
  char *end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || std::isnan(v)) {
    throw ParseError("bad weight '" + field + "'", line);
  }
  return Weight(v);
}

struct ParsedArc {
  StateId src;
  Arc arc;
};

}  // namespace

Wfst ReadText(std::istream &is, SymbolTablePtr isymbols, SymbolTablePtr osymbols) {
  std::vector<ParsedArc> arcs;
  std::vector<std::pair<StateId, Weight>> finals;
  StateId start = kNoStateId;
  StateId max_state = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(std::move(f));
    if (fields.empty()) continue;
    if (fields.size() == 1 || fields.size() == 2) {
      const StateId s = ParseState(fields[0], lineno);
      const Weight w = fields.size() == 2 ? ParseWeight(fields[1], lineno) : Weight::One();
      finals.emplace_back(s, w);
      if (start == kNoStateId) start = s;
      max_state = std::max(max_state, s);
    } else if (fields.size() == 4 || fields.size() == 5) {
      ParsedArc pa;
      pa.src = ParseState(fields[0], lineno);
      pa.arc.nextstate = ParseState(fields[1], lineno);
      pa.arc.ilabel = ParseLabel(fields[2], isymbols.get(), lineno);
      pa.arc.olabel = ParseLabel(fields[3], osymbols.get(), lineno);
      pa.arc.weight = fields.size() == 5 ? ParseWeight(fields[4], lineno) : Weight::One();
      if (pa.arc.weight.IsZero()) throw ParseError("arc weight must be finite", lineno);
      if (start == kNoStateId) start = pa.src;
      max_state = std::max({max_state, pa.src, pa.arc.nextstate});
      arcs.push_back(pa);
    } else {
      throw ParseError("expected 1, 2, 4 or 5 fields, got " + std::to_string(fields.size()),
                       lineno);
    }
  }
  Wfst out(std::move(isymbols), std::move(osymbols));
  if (start == kNoStateId) return out;
  out.AddStates(static_cast<size_t>(max_state) + 1);
  out.SetStart(start);
  for (const ParsedArc &pa : arcs) out.AddArc(pa.src, pa.arc);
  for (const auto &[s, w] : finals) out.SetFinal(s, w);
  return out;
}

Wfst ReadTextString(const std::string &text, SymbolTablePtr isymbols, SymbolTablePtr osymbols) {
  std::istringstream in(text);
  return ReadText(in, std::move(isymbols), std::move(osymbols));
}

Wfst ReadTextFile(const std::string &path, SymbolTablePtr isymbols, SymbolTablePtr osymbols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadText(in, std::move(isymbols), std::move(osymbols));
}

void WriteText(const Wfst &f, std::ostream &os, bool numeric_labels) {
  if (f.Start() == kNoStateId) return;
  const SymbolTable *isyms = numeric_labels ? nullptr : f.InputSymbols().get();
  const SymbolTable *osyms = numeric_labels ? nullptr : f.OutputSymbols().get();
  auto label = [](const SymbolTable *syms, Label l) {
    return syms != nullptr ? syms->Find(l) : std::to_string(l);
  };
  auto weight = [&os](Weight w) {
    if (w == Weight::One()) return;
    os << '\t';
    if (w.IsZero()) {
      os << "Infinity";
    } else {
      os << std::setprecision(std::numeric_limits<double>::max_digits10) << w.Value();
    }
  };
  auto write_state = [&](StateId s) {
    for (const Arc &arc : f.Arcs(s)) {
      os << s << '\t' << arc.nextstate << '\t' << label(isyms, arc.ilabel) << '\t'
         << label(osyms, arc.olabel);
      weight(arc.weight);
      os << '\n';
    }
    if (f.IsFinal(s)) {
      os << s;
      weight(f.Final(s));
      os << '\n';
    }
  };
  // The start state has to come first. A start state with neither arcs nor a
  // final weight has an empty language and cannot be written.
  write_state(f.Start());
  for (StateId s = 0; s < static_cast<StateId>(f.NumStates()); ++s) {
    if (s != f.Start()) write_state(s);
  }
}

std::string WriteTextString(const Wfst &f, bool numeric_labels) {
  std::ostringstream os;
  WriteText(f, os, numeric_labels);
  return os.str();
}

}  // namespace gecfst
