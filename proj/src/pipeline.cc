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

#include "gecfst/pipeline.h"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "gecfst/error.h"
#include "gecfst/fst_ops.h"

namespace gecfst {

namespace {

namespace fs = std::filesystem;

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string &key, const std::string &value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not a number '" + value + "'");
  }
  return v;
}

long ParseInt(const std::string &key, const std::string &value) {
  long v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError(key + ": not an integer '" + value + "'");
  }
  return v;
}

std::string Resolve(const std::string &path, const std::string &base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string Absolute(const std::string &path) {
  return path.empty() ? path : fs::absolute(path).lexically_normal().string();
}

// Runs fn(i) for i in [0, n) on up to `threads` threads. The first exception
// is rethrown after all workers finish.
void ParallelFor(size_t n, int threads, const std::function<void(size_t)> &fn) {
  size_t workers = threads > 0 ? static_cast<size_t>(threads)
                               : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Wfst FlatLm(const std::shared_ptr<SymbolTable> &symbols) {
  Wfst l(symbols);
  l.EnableFeatures(kNumFeatures);
  l.SetStart(l.AddState());
  l.SetFinal(0, Weight::One());
  l.AddArc(0, {kSigma, kSigma, Weight::One(), 0});
  return l;
}

double RoleLambda(const LambdaParams &p, const std::string &role) {
  return role == "nlm" ? p.nlm : p.nmt;
}

}  // namespace

PipelineConfig PipelineConfig::Parse(std::istream &is, const std::string &base_dir) {
  PipelineConfig c;
  int lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const std::string where = "config line " + std::to_string(lineno) + ": " + key;

    bool is_lambda = false;
    for (size_t i = 0; i < kLambdaNames.size(); ++i) {
      if (key == kLambdaNames[i]) {
        LambdaRef(c.lambda, i) = ParseDouble(where, value);
        is_lambda = true;
      }
    }
    if (is_lambda) continue;

    if (key == "mode") {
      if (value == "identity") {
        c.mode = InputMode::kIdentity;
      } else if (value == "nbest") {
        c.mode = InputMode::kNBest;
      } else {
        throw ConfigError(where + ": expected identity or nbest, got '" + value + "'");
      }
    } else if (key == "confusions") {
      c.confusions = Resolve(value, base_dir);
    } else if (key == "lm") {
      c.lm = Resolve(value, base_dir);
    } else if (key == "subwords") {
      c.subwords = Resolve(value, base_dir);
    } else if (key == "nbest") {
      c.nbest = Resolve(value, base_dir);
    } else if (key == "beam") {
      const long b = ParseInt(where, value);
      if (b < 1) throw ConfigError(where + ": beam must be at least 1");
      c.beam = static_cast<size_t>(b);
    } else if (key == "scorer") {
      std::istringstream in(value);
      ScorerSpec s;
      std::string extra;
      if (!(in >> s.role >> s.kind >> s.path) || (in >> extra)) {
        throw ConfigError(where + ": expected 'role kind path'");
      }
      s.path = Resolve(s.path, base_dir);
      c.scorers.push_back(std::move(s));
    } else if (key == "backoff") {
      if (value == "failure") {
        c.backoff = BackoffMode::kFailure;
      } else if (value == "epsilon") {
        c.backoff = BackoffMode::kEpsilon;
      } else {
        throw ConfigError(where + ": expected failure or epsilon, got '" + value + "'");
      }
    } else if (key == "threads") {
      c.threads = static_cast<int>(ParseInt(where, value));
    } else if (key == "max_sweeps") {
      c.max_sweeps = static_cast<int>(ParseInt(where, value));
    } else if (key == "restarts") {
      c.restarts = static_cast<int>(ParseInt(where, value));
    } else if (key == "lambda_min") {
      c.lambda_min = ParseDouble(where, value);
    } else if (key == "lambda_max") {
      c.lambda_max = ParseDouble(where, value);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

PipelineConfig PipelineConfig::ReadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return Parse(in, fs::path(path).parent_path().string());
}

void PipelineConfig::Write(std::ostream &os) const {
  os << "# gecfst pipeline configuration\n"
     << "mode = " << (mode == InputMode::kNBest ? "nbest" : "identity") << "\n";
  auto path = [&](const char *key, const std::string &p) {
    if (!p.empty()) os << key << " = " << Absolute(p) << "\n";
  };
  path("confusions", confusions);
  path("lm", lm);
  path("subwords", subwords);
  path("nbest", nbest);
  for (const auto &s : scorers) os << "scorer = " << s.role << " " << s.kind << " " << Absolute(s.path) << "\n";
  os << "backoff = " << (backoff == BackoffMode::kEpsilon ? "epsilon" : "failure") << "\n"
     << "beam = " << beam << "\n"
     << "threads = " << threads << "\n"
     << "\n# weights (defaults: smt corr mcorr kenlm wc = 1, nlm nmt = 0)\n";
  for (size_t i = 0; i < kLambdaNames.size(); ++i) {
    os << kLambdaNames[i] << " = " << FormatDouble(LambdaGet(lambda, i)) << "\n";
  }
  os << "\n# tuning\n"
     << "max_sweeps = " << max_sweeps << "\n"
     << "restarts = " << restarts << "\n"
     << "lambda_min = " << FormatDouble(lambda_min) << "\n"
     << "lambda_max = " << FormatDouble(lambda_max) << "\n";
}

void PipelineConfig::WriteFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  Write(out);
  if (!out) throw IoError("error writing " + path);
}

void PipelineConfig::Validate() const {
  if (!lambda.AllFinite()) throw ConfigError("lambda values must be finite");
  if (beam < 1) throw ConfigError("beam must be at least 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (max_sweeps < 0) throw ConfigError("max_sweeps must be >= 0");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (!std::isfinite(lambda_min) || !std::isfinite(lambda_max) || lambda_min > lambda_max) {
    throw ConfigError("lambda_min/lambda_max must be finite with lambda_min <= lambda_max");
  }
  if (mode == InputMode::kNBest && nbest.empty()) throw ConfigError("nbest mode needs an nbest file");
  auto need = [](const std::string &what, const std::string &p) {
    if (!p.empty() && !fs::is_regular_file(p)) throw ConfigError("missing " + what + " file " + p);
  };
  need("confusions", confusions);
  need("lm", lm);
  need("subwords", subwords);
  need("nbest", nbest);
  for (const auto &s : scorers) {
    if (s.role != "nlm" && s.role != "nmt") {
      throw ConfigError("scorer role must be nlm or nmt, got '" + s.role + "'");
    }
    if (s.kind != "ngram" && s.kind != "replay") {
      throw ConfigError("scorer kind must be ngram or replay, got '" + s.kind + "'");
    }
    need("scorer", s.path);
  }
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.Validate();
  base_symbols_ = std::make_shared<SymbolTable>();
  if (!config_.confusions.empty()) confusions_ = ConfusionTable::ReadFile(config_.confusions);
  if (!config_.lm.empty()) {
    lm_ = std::make_shared<const NGramModel>(NGramModel::ReadArpaFile(config_.lm));
    LmFstOptions opts;
    opts.backoff = config_.backoff;
    opts.num_features = kNumFeatures;
    opts.feature_index = kFeatLm;
    lm_fst_ = LmToFst(*lm_, 1.0, base_symbols_, opts);
  } else {
    lm_fst_ = FlatLm(base_symbols_);
  }
  if (!config_.subwords.empty()) subwords_ = SubwordVocab::ReadFile(config_.subwords);
  for (const auto &s : config_.scorers) {
    std::shared_ptr<const Scorer> scorer;
    if (s.kind == "ngram") {
      scorer = std::make_shared<NGramScorer>(
          std::make_shared<const NGramModel>(NGramModel::ReadArpaFile(s.path)), s.role);
    } else {
      scorer = std::make_shared<ReplayScorer>(ReplayScorer::ReadFile(s.path));
    }
    scorers_.emplace_back(s.role, std::move(scorer));
  }
}

Pipeline::Batch Pipeline::Prepare(const std::vector<Sentence> &sources) const {
  std::vector<std::vector<NBestEntry>> nbest;
  if (config_.mode == InputMode::kNBest) nbest = ReadNBestFile(config_.nbest, sources.size());

  Batch batch;
  batch.items_.resize(sources.size());
  ParallelFor(sources.size(), config_.threads, [&](size_t i) {
    Batch::Item &item = batch.items_[i];
    item.source = sources[i];
    try {
      auto syms = SentenceSymbols(base_symbols_);
      const Wfst input = config_.mode == InputMode::kNBest
                             ? BuildInputNBest({sources[i], nbest[i]}, 1.0, syms)
                             : BuildInputIdentity(sources[i], syms);
      const Wfst edit = BuildEditTransducer(OutputAlphabet(input), confusions_, syms);
      const Wfst penalizer = BuildPenalizer(config_.lambda, syms);
      item.hword = AssembleHword(input, edit, penalizer, *lm_fst_);
      if (subwords_) {
        const Wfst t = BuildSubwordTransducer(OutputAlphabet(*item.hword), *subwords_, syms);
        item.expanded = ExpandSubwords(*item.hword, t);
      }
    } catch (const Error &e) {
      item.hword.reset();
      item.expanded.reset();
      item.error = e.what();
    }
  });
  return batch;
}

CorrectedSentence Pipeline::DecodeOne(const Batch::Item &item, const LambdaParams &lambda) const {
  CorrectedSentence out;
  auto fallback = [&](const std::string &why) {
    out.words = item.source;
    out.fallback = true;
    out.warning = why;
    return out;
  };
  if (!item.hword) return fallback(item.error);
  try {
    const auto scales = lambda.FeatureScales();
    Wfst h = Reweight(item.expanded ? *item.expanded : *item.hword, scales);
    std::vector<WeightedScorer> active;
    for (const auto &[role, scorer] : scorers_) {
      const double l = RoleLambda(lambda, role);
      if (l != 0.0) active.push_back({scorer, l});
    }
    if (active.empty()) {
      const DecodeResult r = ExactDecode(h);
      out.words = subwords_ ? Desegment(r.words) : r.words;
    } else {
      h = Optimize(h);
      BeamOptions opts;
      opts.beam = config_.beam;
      out.words = BeamDecode(h, active, opts).words;
    }
  } catch (const Error &e) {
    return fallback(e.what());
  }
  return out;
}

std::vector<CorrectedSentence> Pipeline::Decode(const Batch &batch,
                                                const LambdaParams &lambda) const {
  if (!lambda.AllFinite()) throw ConfigError("lambda values must be finite");
  std::vector<CorrectedSentence> out(batch.Size());
  ParallelFor(batch.Size(), config_.threads,
              [&](size_t i) { out[i] = DecodeOne(batch.items_[i], lambda); });
  return out;
}

std::vector<CorrectedSentence> Pipeline::Correct(const std::vector<Sentence> &sources) const {
  return Decode(Prepare(sources), config_.lambda);
}

Wfst Pipeline::WordLattice(const Batch &batch, size_t i) const {
  const Batch::Item &item = batch.items_.at(i);
  if (!item.hword) {
    return BuildLinear(item.source, Weight::One(), SentenceSymbols(base_symbols_));
  }
  return Reweight(*item.hword, config_.lambda.FeatureScales());
}

std::vector<size_t> Pipeline::TunableLambdas() const {
  std::vector<size_t> out;
  const bool nbest = config_.mode == InputMode::kNBest;
  bool nlm = false, nmt = false;
  for (const auto &s : config_.scorers) (s.role == "nlm" ? nlm : nmt) = true;
  const bool use[] = {nbest, !confusions_.Empty(), nbest, lm_ != nullptr, nlm, nmt, true};
  for (size_t i = 0; i < kLambdaNames.size(); ++i) {
    if (use[i]) out.push_back(i);
  }
  return out;
}

Metric ParseMetric(const std::string &name) {
  if (name == "gleu") return Metric::kGleu;
  if (name == "f05") return Metric::kF05;
  throw ConfigError("unknown metric '" + name + "' (expected gleu or f05)");
}

EvalCorpus LoadEvalCorpus(const std::string &sources, const std::vector<std::string> &references,
                          const std::string &gold) {
  EvalCorpus c;
  c.sources = ReadSentencesFile(sources);
  if (references.empty()) throw ConfigError("at least one reference file is needed");
  c.references.resize(c.sources.size());
  for (const auto &path : references) {
    const auto refs = ReadSentencesFile(path);
    if (refs.size() != c.sources.size()) {
      throw ConfigError(path + " has " + std::to_string(refs.size()) + " lines, " + sources +
                        " has " + std::to_string(c.sources.size()));
    }
    for (size_t i = 0; i < refs.size(); ++i) c.references[i].push_back(refs[i]);
  }
  if (!gold.empty()) c.gold_edits = ReadGoldEditsFile(gold, c.sources.size());
  c.Validate();
  return c;
}

double Score(Metric metric, const EvalCorpus &corpus, const std::vector<Sentence> &hyps) {
  if (metric == Metric::kF05) {
    if (corpus.gold_edits.empty()) throw ConfigError("f05 needs gold edits");
    return EditF05(hyps, corpus.sources, corpus.gold_edits).f05;
  }
  std::vector<Sentence> refs;
  for (const auto &r : corpus.references) refs.push_back(r.front());
  return Gleu(hyps, corpus.sources, refs);
}

namespace {

std::vector<Sentence> Words(const std::vector<CorrectedSentence> &out) {
  std::vector<Sentence> words;
  words.reserve(out.size());
  for (const auto &s : out) words.push_back(s.words);
  return words;
}

}  // namespace

TuneOutcome Tune(const Pipeline &pipeline, const EvalCorpus &dev, Metric metric, int max_sweeps) {
  if (dev.sources.empty()) throw ConfigError("development corpus is empty");
  dev.Validate();
  if (metric == Metric::kF05 && dev.gold_edits.empty()) throw ConfigError("f05 needs gold edits");
  const PipelineConfig &cfg = pipeline.Config();
  const Pipeline::Batch batch = pipeline.Prepare(dev.sources);
  const auto objective = [&](const LambdaParams &p) {
    return Score(metric, dev, Words(pipeline.Decode(batch, p)));
  };

  PowellOptions opts;
  opts.max_sweeps = max_sweeps >= 0 ? max_sweeps : cfg.max_sweeps;
  opts.restarts = cfg.restarts;
  const std::vector<size_t> free = pipeline.TunableLambdas();
  const LambdaTuneResult r =
      PowellTune(objective, cfg.lambda, free, cfg.lambda_min, cfg.lambda_max, opts);

  TuneOutcome out;
  out.lambda = r.best;
  out.best = r.value;
  out.initial = r.search.history.empty() ? r.value : r.search.history.front().value;

  std::ostringstream rep;
  rep << std::fixed << std::setprecision(6);
  rep << "restart\tsweep\t" << (metric == Metric::kGleu ? "gleu" : "f05");
  for (size_t i : free) rep << "\t" << kLambdaNames[i];
  rep << "\n";
  for (const PowellStep &step : r.search.history) {
    rep << step.restart << "\t" << step.sweep << "\t" << step.value;
    for (double v : step.point) rep << "\t" << v;
    rep << "\n";
  }
  out.report = rep.str();
  return out;
}

std::string Report(const Pipeline &pipeline, const EvalCorpus &test) {
  test.Validate();
  const Pipeline::Batch batch = pipeline.Prepare(test.sources);
  const std::vector<Sentence> system = Words(pipeline.Decode(batch, pipeline.Config().lambda));

  std::vector<Sentence> refs;
  for (const auto &r : test.references) refs.push_back(r.front());

  // The uncorrected input's only hypothesis is the input itself.
  size_t total = 0, outside = 0;
  for (size_t i = 0; i < test.sources.size(); ++i) {
    for (const auto &r : test.references[i]) {
      ++total;
      outside += r != test.sources[i];
    }
  }
  const double source_oracle = total == 0 ? 0.0 : static_cast<double>(outside) / total;
  const double system_oracle =
      OracleErrorRate(test, [&](size_t i) { return pipeline.WordLattice(batch, i); });

  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "name\tGLEU\tP\tR\tF0.5\toracle_error\n";
  auto row = [&](const char *name, const std::vector<Sentence> &hyps, double oracle) {
    os << name << "\t" << Gleu(hyps, test.sources, refs);
    if (test.gold_edits.empty()) {
      os << "\t-\t-\t-";
    } else {
      const PRF prf = EditF05(hyps, test.sources, test.gold_edits);
      os << "\t" << prf.precision << "\t" << prf.recall << "\t" << prf.f05;
    }
    os << "\t" << oracle << "\n";
  };
  row("source", test.sources, source_oracle);
  row("system", system, system_oracle);
  return os.str();
}

}  // namespace gecfst
