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

#include "gecfst/symbol_table.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gecfst/error.h"

namespace gecfst {

namespace {

const std::string &EmptyString() {
  static const std::string empty;
  return empty;
}

}  // namespace

SymbolTable::SymbolTable() {
  for (const char *s : {kEpsilonSymbol, kSigmaSymbol, kPhiSymbol, kCorrSymbol,
                        kMcorrSymbol, kUnkSymbol}) {
    AddSymbol(s);
  }
}

Label SymbolTable::AddSymbol(std::string_view symbol) {
  std::string key(symbol);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<Label>(symbols_.size());
  symbols_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

Label SymbolTable::Find(std::string_view symbol) const {
  auto it = ids_.find(std::string(symbol));
  return it == ids_.end() ? kNoLabel : it->second;
}

const std::string &SymbolTable::Find(Label id) const {
  if (id < 0 || static_cast<size_t>(id) >= symbols_.size()) return EmptyString();
  return symbols_[id];
}

bool SymbolTable::Compatible(const SymbolTable *a, const SymbolTable *b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return true;
  const size_t n = std::min(a->Size(), b->Size());
  for (size_t i = 0; i < n; ++i) {
    if (a->symbols_[i] != b->symbols_[i]) return false;
  }
  return true;
}

std::shared_ptr<SymbolTable> SymbolTable::ReadText(std::istream &is) {
  std::map<Label, std::string> user;
  auto table = std::make_shared<SymbolTable>();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string symbol, id_text, extra;
    if (!(fields >> symbol)) continue;  // blank line
    if (!(fields >> id_text) || (fields >> extra)) {
      throw ParseError("expected \"symbol id\"", lineno);
    }
    Label id = 0;
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc() || ptr != id_text.data() + id_text.size() || id < 0) {
      throw ParseError("bad symbol id '" + id_text + "'", lineno);
    }
    if (id < kFirstUserLabel) {
      if (table->Find(id) != symbol) {
        throw ParseError("reserved id " + id_text + " must be " + table->Find(id), lineno);
      }
      continue;
    }
    if (!user.emplace(id, symbol).second) {
      throw ParseError("duplicate id " + id_text, lineno);
    }
  }
  Label expected = kFirstUserLabel;
  for (const auto &[id, symbol] : user) {
    if (id != expected) {
      throw ParseError("symbol ids must be dense from 6; missing " + std::to_string(expected), 0);
    }
    if (table->Find(symbol) != kNoLabel) {
      throw ParseError("symbol '" + symbol + "' defined twice", 0);
    }
    table->AddSymbol(symbol);
    ++expected;
  }
  return table;
}

std::shared_ptr<SymbolTable> SymbolTable::ReadTextFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open symbol table " + path);
  return ReadText(in);
}

void SymbolTable::WriteText(std::ostream &os) const {
  for (size_t i = 0; i < symbols_.size(); ++i) os << symbols_[i] << ' ' << i << '\n';
}

SymbolTablePtr WiderSymbols(const SymbolTablePtr &a, const SymbolTablePtr &b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (!SymbolTable::Compatible(a.get(), b.get())) return a;
  return b->Size() > a->Size() ? b : a;
}

}  // namespace gecfst
