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

#include "gecfst/gecfst.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"
#include "gecfst/ngram.h"
#include "gecfst/pipeline.h"
#include "gecfst/text_io.h"
#include "gecfst/tune_eval.h"

struct gecfst_symtab {
  std::shared_ptr<const gecfst::SymbolTable> table;
};
struct gecfst_fst {
  gecfst::Wfst fst;
};
struct gecfst_lm {
  gecfst::NGramModel model;
};
struct gecfst_pipeline {
  gecfst::Pipeline pipeline;
};

namespace {

thread_local std::string last_error;

class InvalidArgument : public std::exception {
 public:
  explicit InvalidArgument(std::string what) : what_(std::move(what)) {}
  const char *what() const noexcept override { return what_.c_str(); }

 private:
  std::string what_;
};

gecfst_status Fail(gecfst_status status, const char *what) {
  last_error = what;
  return status;
}

template <typename F>
gecfst_status Guard(F &&body) {
  try {
    body();
    return GECFST_OK;
  } catch (const InvalidArgument &e) {
    return Fail(GECFST_ERR_INVALID_ARGUMENT, e.what());
  } catch (const gecfst::ConfigError &e) {
    return Fail(GECFST_ERR_CONFIG, e.what());
  } catch (const gecfst::ParseError &e) {
    return Fail(GECFST_ERR_PARSE, e.what());
  } catch (const gecfst::FormatError &e) {
    return Fail(GECFST_ERR_FORMAT, e.what());
  } catch (const gecfst::UnsupportedError &e) {
    return Fail(GECFST_ERR_UNSUPPORTED, e.what());
  } catch (const gecfst::DecodeError &e) {
    return Fail(GECFST_ERR_DECODE, e.what());
  } catch (const gecfst::IoError &e) {
    return Fail(GECFST_ERR_IO, e.what());
  } catch (const std::bad_alloc &) {
    return Fail(GECFST_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return Fail(GECFST_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(GECFST_ERR_INTERNAL, "unknown error");
  }
}

void Require(const void *p, const char *name) {
  if (p == nullptr) throw InvalidArgument(std::string(name) + " must not be NULL");
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gecfst::SymbolTablePtr Table(const gecfst_symtab *t) { return t ? t->table : nullptr; }

std::vector<std::string> References(const char *const *refs, size_t n) {
  if (n == 0) throw InvalidArgument("at least one reference file is needed");
  Require(refs, "references");
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    Require(refs[i], "reference path");
    out.emplace_back(refs[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char *gecfst_version(void) { return "0.1.0"; }

const char *gecfst_status_name(gecfst_status status) {
  switch (status) {
    case GECFST_OK: return "ok";
    case GECFST_ERR_CONFIG: return "configuration error";
    case GECFST_ERR_PARSE: return "parse error";
    case GECFST_ERR_FORMAT: return "format error";
    case GECFST_ERR_UNSUPPORTED: return "unsupported operation";
    case GECFST_ERR_DECODE: return "decode error";
    case GECFST_ERR_IO: return "i/o error";
    case GECFST_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GECFST_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *gecfst_last_error(void) { return last_error.c_str(); }

void gecfst_string_free(char *s) { std::free(s); }

gecfst_status gecfst_symtab_read(const char *path, gecfst_symtab **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new gecfst_symtab{gecfst::SymbolTable::ReadTextFile(path)};
  });
}

gecfst_status gecfst_symtab_size(const gecfst_symtab *t, size_t *out) {
  return Guard([&] {
    Require(t, "symtab");
    Require(out, "out");
    *out = t->table->Size();
  });
}

void gecfst_symtab_free(gecfst_symtab *t) { delete t; }

gecfst_status gecfst_fst_from_text(const char *text, const gecfst_symtab *isyms,
                                   const gecfst_symtab *osyms, gecfst_fst **out) {
  return Guard([&] {
    Require(text, "text");
    Require(out, "out");
    *out = new gecfst_fst{gecfst::ReadTextString(text, Table(isyms), Table(osyms))};
  });
}

gecfst_status gecfst_fst_read(const char *path, const gecfst_symtab *isyms,
                              const gecfst_symtab *osyms, gecfst_fst **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new gecfst_fst{gecfst::ReadTextFile(path, Table(isyms), Table(osyms))};
  });
}

gecfst_status gecfst_fst_set_symbols(gecfst_fst *f, const gecfst_symtab *isyms,
                                     const gecfst_symtab *osyms) {
  return Guard([&] {
    Require(f, "fst");
    const gecfst::Wfst &w = f->fst;
    for (gecfst::StateId s = 0; s < static_cast<gecfst::StateId>(w.NumStates()); ++s) {
      for (const gecfst::Arc &a : w.Arcs(s)) {
        if (isyms && static_cast<size_t>(a.ilabel) >= isyms->table->Size()) {
          throw gecfst::ConfigError("input label " + std::to_string(a.ilabel) +
                                    " has no symbol");
        }
        if (osyms && static_cast<size_t>(a.olabel) >= osyms->table->Size()) {
          throw gecfst::ConfigError("output label " + std::to_string(a.olabel) +
                                    " has no symbol");
        }
      }
    }
    f->fst.SetInputSymbols(Table(isyms));
    f->fst.SetOutputSymbols(Table(osyms));
  });
}

gecfst_status gecfst_fst_to_text(const gecfst_fst *f, int numeric_labels, char **out) {
  return Guard([&] {
    Require(f, "fst");
    Require(out, "out");
    *out = Dup(gecfst::WriteTextString(f->fst, numeric_labels != 0));
  });
}

gecfst_status gecfst_fst_compose(const gecfst_fst *a, const gecfst_fst *b, gecfst_fst **out) {
  return Guard([&] {
    Require(a, "a");
    Require(b, "b");
    Require(out, "out");
    *out = new gecfst_fst{gecfst::Compose(a->fst, b->fst)};
  });
}

gecfst_status gecfst_fst_optimize(const gecfst_fst *f, gecfst_fst **out) {
  return Guard([&] {
    Require(f, "fst");
    Require(out, "out");
    *out = new gecfst_fst{gecfst::Optimize(f->fst)};
  });
}

gecfst_status gecfst_fst_num_states(const gecfst_fst *f, size_t *out) {
  return Guard([&] {
    Require(f, "fst");
    Require(out, "out");
    *out = f->fst.NumStates();
  });
}

gecfst_status gecfst_fst_num_arcs(const gecfst_fst *f, size_t *out) {
  return Guard([&] {
    Require(f, "fst");
    Require(out, "out");
    *out = f->fst.NumArcs();
  });
}

gecfst_status gecfst_fst_shortest_distance(const gecfst_fst *f, double *out) {
  return Guard([&] {
    Require(f, "fst");
    Require(out, "out");
    *out = gecfst::ShortestDistance(f->fst).Value();
  });
}

void gecfst_fst_free(gecfst_fst *f) { delete f; }

gecfst_status gecfst_lm_train(const char *corpus_path, int order, double discount,
                              gecfst_lm **out) {
  return Guard([&] {
    Require(corpus_path, "corpus_path");
    Require(out, "out");
    const auto corpus = gecfst::ReadSentencesFile(corpus_path);
    *out = new gecfst_lm{gecfst::NGramModel::Train(corpus, order, discount)};
  });
}

gecfst_status gecfst_lm_read_arpa(const char *path, gecfst_lm **out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new gecfst_lm{gecfst::NGramModel::ReadArpaFile(path)};
  });
}

gecfst_status gecfst_lm_write_arpa(const gecfst_lm *lm, const char *path) {
  return Guard([&] {
    Require(lm, "lm");
    Require(path, "path");
    std::ofstream os(path);
    if (!os) throw gecfst::IoError(std::string("cannot write ") + path);
    lm->model.WriteArpa(os);
    if (!os) throw gecfst::IoError(std::string("error writing ") + path);
  });
}

gecfst_status gecfst_lm_sentence_logprob(const gecfst_lm *lm, const char *sentence,
                                         double *out) {
  return Guard([&] {
    Require(lm, "lm");
    Require(sentence, "sentence");
    Require(out, "out");
    std::istringstream in(sentence);
    std::vector<std::string> tokens;
    for (std::string w; in >> w;) tokens.push_back(w);
    *out = lm->model.SentenceLogProb(tokens);
  });
}

void gecfst_lm_free(gecfst_lm *lm) { delete lm; }

gecfst_status gecfst_pipeline_load(const char *config_path, gecfst_pipeline **out) {
  return Guard([&] {
    Require(config_path, "config_path");
    Require(out, "out");
    *out = new gecfst_pipeline{gecfst::Pipeline(gecfst::PipelineConfig::ReadFile(config_path))};
  });
}

gecfst_status gecfst_pipeline_correct(const gecfst_pipeline *p, const char *text, char **output,
                                      char **warnings) {
  return Guard([&] {
    Require(p, "pipeline");
    Require(text, "text");
    Require(output, "output");
    std::istringstream in(text);
    const auto sentences = gecfst::ReadSentences(in);
    const auto corrected = p->pipeline.Correct(sentences);
    std::string out, warn;
    for (size_t i = 0; i < corrected.size(); ++i) {
      for (size_t k = 0; k < corrected[i].words.size(); ++k) {
        if (k > 0) out += ' ';
        out += corrected[i].words[k];
      }
      out += '\n';
      if (corrected[i].fallback) {
        warn += "line " + std::to_string(i + 1) + ": " + corrected[i].warning + "\n";
      }
    }
    char *o = Dup(out);
    if (warnings != nullptr) {
      try {
        *warnings = Dup(warn);
      } catch (...) {
        std::free(o);
        throw;
      }
    }
    *output = o;
  });
}

gecfst_status gecfst_pipeline_tune(const gecfst_pipeline *p, const char *sources,
                                   const char *const *references, size_t num_references,
                                   const char *gold, const char *metric, int max_sweeps,
                                   const char *out_config, char **report) {
  return Guard([&] {
    Require(p, "pipeline");
    Require(sources, "sources");
    Require(metric, "metric");
    Require(report, "report");
    const gecfst::Metric m = gecfst::ParseMetric(metric);
    const auto corpus =
        gecfst::LoadEvalCorpus(sources, References(references, num_references), gold ? gold : "");
    const gecfst::TuneOutcome r = gecfst::Tune(p->pipeline, corpus, m, max_sweeps);
    if (out_config != nullptr) {
      gecfst::PipelineConfig cfg = p->pipeline.Config();
      cfg.lambda = r.lambda;
      cfg.WriteFile(out_config);
    }
    *report = Dup(r.report);
  });
}

gecfst_status gecfst_pipeline_report(const gecfst_pipeline *p, const char *sources,
                                     const char *const *references, size_t num_references,
                                     const char *gold, char **table) {
  return Guard([&] {
    Require(p, "pipeline");
    Require(sources, "sources");
    Require(table, "table");
    const auto corpus =
        gecfst::LoadEvalCorpus(sources, References(references, num_references), gold ? gold : "");
    *table = Dup(gecfst::Report(p->pipeline, corpus));
  });
}

void gecfst_pipeline_free(gecfst_pipeline *p) { delete p; }

}  // extern "C"
