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

// AT&T-style text format.
//
//   src dst isym osym [weight]     one arc
//   state [weight]                 one final state
//
// The start state is the first field of the first line and an omitted
// weight means 0. An empty file is the machine with no states. Labels are
// looked up in the given symbol tables, or must be integers when none is
// given.

#ifndef GECFST_TEXT_IO_H_
#define GECFST_TEXT_IO_H_

#include <iosfwd>
#include <string>

#include "gecfst/wfst.h"

namespace gecfst {

Wfst ReadText(std::istream &is, SymbolTablePtr isymbols = nullptr,
              SymbolTablePtr osymbols = nullptr);
Wfst ReadTextString(const std::string &text, SymbolTablePtr isymbols = nullptr,
                    SymbolTablePtr osymbols = nullptr);
Wfst ReadTextFile(const std::string &path, SymbolTablePtr isymbols = nullptr,
                  SymbolTablePtr osymbols = nullptr);

// Writes labels as text when the machine has symbol tables and
// `numeric_labels` is false. Weights use enough digits to round-trip.
void WriteText(const Wfst &f, std::ostream &os, bool numeric_labels = false);
std::string WriteTextString(const Wfst &f, bool numeric_labels = false);

}  // namespace gecfst

#endif  // GECFST_TEXT_IO_H_
