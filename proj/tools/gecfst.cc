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

// gecfst command-line tool. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gecfst/gecfst.h"

namespace {

struct Failure {
  gecfst_status status;
  std::string message;
};

void Check(gecfst_status s) {
  if (s != GECFST_OK) throw Failure{s, gecfst_last_error()};
}

struct StringDeleter {
  void operator()(char *s) const { gecfst_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

template <typename T, void (*Free)(T *)>
struct HandleDeleter {
  void operator()(T *p) const { Free(p); }
};
using Fst = std::unique_ptr<gecfst_fst, HandleDeleter<gecfst_fst, gecfst_fst_free>>;
using Symtab = std::unique_ptr<gecfst_symtab, HandleDeleter<gecfst_symtab, gecfst_symtab_free>>;
using Lm = std::unique_ptr<gecfst_lm, HandleDeleter<gecfst_lm, gecfst_lm_free>>;
using PipelineHandle =
    std::unique_ptr<gecfst_pipeline, HandleDeleter<gecfst_pipeline, gecfst_pipeline_free>>;

std::string ReadAll(const std::string &path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{GECFST_ERR_IO, "cannot open " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteAll(const std::string &path, const char *text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{GECFST_ERR_IO, "cannot write " + path};
  out << text;
  if (!out) throw Failure{GECFST_ERR_IO, "error writing " + path};
}

Symtab LoadSymbols(const std::string &path) {
  if (path.empty()) return nullptr;
  gecfst_symtab *t = nullptr;
  Check(gecfst_symtab_read(path.c_str(), &t));
  return Symtab(t);
}

PipelineHandle LoadPipeline(const std::string &config) {
  gecfst_pipeline *p = nullptr;
  Check(gecfst_pipeline_load(config.c_str(), &p));
  return PipelineHandle(p);
}

std::vector<const char *> CStrings(const std::vector<std::string> &v) {
  std::vector<const char *> out;
  for (const auto &s : v) out.push_back(s.c_str());
  return out;
}

Fst ReadFst(const std::string &path, const gecfst_symtab *isyms, const gecfst_symtab *osyms) {
  const std::string text = ReadAll(path);
  gecfst_fst *f = nullptr;
  Check(gecfst_fst_from_text(text.c_str(), isyms, osyms, &f));
  return Fst(f);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Grammatical error correction with weighted finite-state transducers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gecfst_version()));

  // correct
  std::string config, input = "-", output = "-";
  auto *correct = app.add_subcommand("correct", "Correct one sentence per line");
  correct->add_option("-c,--config", config, "Pipeline configuration")->required();
  correct->add_option("-i,--input", input, "Input sentences (default stdin)");
  correct->add_option("-o,--output", output, "Output file (default stdout)");

  // tune / report
  std::string source, gold, metric = "gleu", out_config, report_path = "-";
  std::vector<std::string> references;
  int max_sweeps = -1;
  auto *tune = app.add_subcommand("tune", "Tune the lambdas on a development corpus");
  tune->add_option("-c,--config", config, "Pipeline configuration")->required();
  tune->add_option("-s,--source", source, "Source sentences")->required();
  tune->add_option("-r,--reference", references, "Reference sentences (repeatable)")->required();
  tune->add_option("-g,--gold", gold, "Gold edits (needed for f05)");
  tune->add_option("-m,--metric", metric, "gleu or f05");
  tune->add_option("--max-sweeps", max_sweeps, "Override the configured sweep limit");
  tune->add_option("-o,--output-config", out_config, "Where to write the tuned configuration");
  tune->add_option("--report", report_path, "Per-sweep report (default stdout)");

  auto *report = app.add_subcommand("report", "Evaluate the system on a test corpus");
  report->add_option("-c,--config", config, "Pipeline configuration")->required();
  report->add_option("-s,--source", source, "Source sentences")->required();
  report->add_option("-r,--reference", references, "Reference sentences (repeatable)")->required();
  report->add_option("-g,--gold", gold, "Gold edits");
  report->add_option("-o,--output", output, "Output file (default stdout)");

  // train-lm
  std::string corpus;
  int order = 3;
  double discount = 0.5;
  auto *train = app.add_subcommand("train-lm", "Train an n-gram model and write it as ARPA");
  train->add_option("corpus", corpus, "Training text, one sentence per line")->required();
  train->add_option("-n,--order", order, "Model order")->check(CLI::PositiveNumber);
  train->add_option("-d,--discount", discount, "Absolute discount in (0,1)");
  train->add_option("-o,--output", output, "ARPA output file")->required();

  // fst utilities
  auto *fst = app.add_subcommand("fst", "Text FST utilities");
  fst->require_subcommand(1);
  std::string isymbols, osymbols, fst_in, fst_in2;
  bool numeric = false;
  auto *print = fst->add_subcommand("print", "Print a compiled FST, with symbolic labels when tables are given");
  auto *compile = fst->add_subcommand("compile", "Check a text FST and write it with numeric labels");
  auto *compose = fst->add_subcommand("compose", "Compose two compiled FSTs");
  for (auto *sub : {print, compile, compose}) {
    sub->add_option("--isymbols", isymbols, "Input symbol table");
    sub->add_option("--osymbols", osymbols, "Output symbol table");
    sub->add_option("-o,--output", output, "Output file (default stdout)");
  }
  print->add_option("fst", fst_in, "FST file (default stdin)");
  print->add_flag("--numeric", numeric, "Print numeric labels");
  compile->add_option("fst", fst_in, "Text FST (default stdin)");
  compose->add_option("a", fst_in, "Left FST")->required();
  compose->add_option("b", fst_in2, "Right FST")->required();
  compose->add_flag("--numeric", numeric, "Print numeric labels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*correct) {
      const auto p = LoadPipeline(config);
      const std::string text = ReadAll(input);
      char *out = nullptr, *warnings = nullptr;
      Check(gecfst_pipeline_correct(p.get(), text.c_str(), &out, &warnings));
      CString o(out), w(warnings);
      if (w && *w) std::cerr << "gecfst: warning: identity fallback\n" << w.get();
      WriteAll(output, o.get());
    } else if (*tune) {
      const auto p = LoadPipeline(config);
      const auto refs = CStrings(references);
      char *rep = nullptr;
      Check(gecfst_pipeline_tune(p.get(), source.c_str(), refs.data(), refs.size(),
                                 gold.empty() ? nullptr : gold.c_str(), metric.c_str(), max_sweeps,
                                 out_config.empty() ? nullptr : out_config.c_str(), &rep));
      CString r(rep);
      WriteAll(report_path, r.get());
    } else if (*report) {
      const auto p = LoadPipeline(config);
      const auto refs = CStrings(references);
      char *table = nullptr;
      Check(gecfst_pipeline_report(p.get(), source.c_str(), refs.data(), refs.size(),
                                   gold.empty() ? nullptr : gold.c_str(), &table));
      CString t(table);
      WriteAll(output, t.get());
    } else if (*train) {
      gecfst_lm *lm = nullptr;
      Check(gecfst_lm_train(corpus.c_str(), order, discount, &lm));
      Lm handle(lm);
      Check(gecfst_lm_write_arpa(handle.get(), output.c_str()));
    } else if (*fst) {
      const Symtab is = LoadSymbols(isymbols);
      const Symtab os = LoadSymbols(osymbols.empty() ? isymbols : osymbols);
      Fst result;
      if (*compile) {
        // Symbolic (or numeric) text in, numeric text out.
        result = ReadFst(fst_in, is.get(), os.get());
      } else if (*print) {
        result = ReadFst(fst_in, nullptr, nullptr);
        Check(gecfst_fst_set_symbols(result.get(), is.get(), os.get()));
      } else {
        const Fst a = ReadFst(fst_in, nullptr, nullptr);
        const Fst b = ReadFst(fst_in2, nullptr, nullptr);
        gecfst_fst *c = nullptr;
        Check(gecfst_fst_compose(a.get(), b.get(), &c));
        result.reset(c);
        Check(gecfst_fst_set_symbols(result.get(), is.get(), os.get()));
      }
      char *text = nullptr;
      const bool as_numbers = *compile || numeric || !is;
      Check(gecfst_fst_to_text(result.get(), as_numbers ? 1 : 0, &text));
      CString t(text);
      WriteAll(output, t.get());
    }
  } catch (const Failure &f) {
    std::cerr << "gecfst: " << gecfst_status_name(f.status) << ": " << f.message << "\n";
    return f.status == GECFST_ERR_CONFIG || f.status == GECFST_ERR_INVALID_ARGUMENT ? 2 : 1;
  }
  return 0;
}
