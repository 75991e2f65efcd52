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

#include "gecfst/tune_eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "gecfst/error.h"

namespace gecfst {

namespace {

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return out;
}

Sentence Tokenize(const std::string &s) {
  std::istringstream in(s);
  Sentence out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

size_t ParseIndex(const std::string &field, int line, const char *what) {
  size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != field.size() || v < 0) {
    throw ParseError(std::string("bad ") + what + " '" + field + "'", line);
  }
  return static_cast<size_t>(v);
}

using NGramCounts = std::map<std::span<const std::string>, size_t,
                             decltype([](std::span<const std::string> a,
                                         std::span<const std::string> b) {
                               return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                                                   b.end());
                             })>;

NGramCounts Count(const Sentence &s, size_t n) {
  NGramCounts c;
  for (size_t i = 0; i + n <= s.size(); ++i) ++c[std::span<const std::string>(s).subspan(i, n)];
  return c;
}

size_t CountOf(const NGramCounts &c, std::span<const std::string> g) {
  const auto it = c.find(g);
  return it == c.end() ? 0 : it->second;
}

}  // namespace

void EvalCorpus::Validate() const {
  if (references.size() != sources.size()) {
    throw ConfigError("corpus has " + std::to_string(sources.size()) + " sources but " +
                      std::to_string(references.size()) + " reference sets");
  }
  for (size_t i = 0; i < references.size(); ++i) {
    if (references[i].empty()) throw ConfigError("sentence " + std::to_string(i) + " has no reference");
  }
  if (gold_edits.empty()) return;
  if (gold_edits.size() != sources.size()) {
    throw ConfigError("gold edits cover " + std::to_string(gold_edits.size()) +
                      " sentences, corpus has " + std::to_string(sources.size()));
  }
  for (size_t i = 0; i < gold_edits.size(); ++i) {
    std::vector<Edit> sorted = gold_edits[i];
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); ++k) {
      const Edit &e = sorted[k];
      if (e.start > e.end || e.end > sources[i].size()) {
        throw ConfigError("gold edit [" + std::to_string(e.start) + "," + std::to_string(e.end) +
                          ") outside sentence " + std::to_string(i));
      }
      if (k > 0 && sorted[k - 1].end > e.start) {
        throw ConfigError("overlapping gold edits in sentence " + std::to_string(i));
      }
    }
  }
}

std::vector<Sentence> ReadSentences(std::istream &is) {
  std::vector<Sentence> out;
  for (std::string line; std::getline(is, line);) out.push_back(Tokenize(line));
  return out;
}

std::vector<Sentence> ReadSentencesFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadSentences(in);
}

std::vector<std::vector<Edit>> ReadGoldEdits(std::istream &is, size_t num_sentences) {
  std::vector<std::vector<Edit>> out(num_sentences);
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto f = SplitTabs(line);
    if (f.size() != 4) throw ParseError("expected 4 tab-separated fields", lineno);
    const size_t id = ParseIndex(f[0], lineno, "sentence id");
    Edit e;
    e.start = ParseIndex(f[1], lineno, "start");
    e.end = ParseIndex(f[2], lineno, "end");
    if (e.start > e.end) throw ParseError("start after end", lineno);
    if (id >= num_sentences) throw ParseError("sentence id out of range", lineno);
    e.replacement = Tokenize(f[3]);
    out[id].push_back(std::move(e));
  }
  return out;
}

std::vector<std::vector<Edit>> ReadGoldEditsFile(const std::string &path, size_t num_sentences) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return ReadGoldEdits(in, num_sentences);
}

double Gleu(std::span<const Sentence> hyps, std::span<const Sentence> sources,
            std::span<const Sentence> refs, int max_n) {
  if (hyps.size() != sources.size() || hyps.size() != refs.size()) {
    throw ConfigError("GLEU: hypothesis, source and reference counts differ");
  }
  if (max_n < 1) throw ConfigError("GLEU: max_n must be positive");
  double hyp_len = 0, ref_len = 0;
  for (size_t i = 0; i < hyps.size(); ++i) {
    hyp_len += static_cast<double>(hyps[i].size());
    ref_len += static_cast<double>(refs[i].size());
  }
  if (hyp_len == 0) return 0.0;

  double log_sum = 0.0;
  int used = 0;
  for (int n = 1; n <= max_n; ++n) {
    double m = 0, d = 0, h = 0;
    for (size_t i = 0; i < hyps.size(); ++i) {
      const NGramCounts ch = Count(hyps[i], n);
      const NGramCounts cs = Count(sources[i], n);
      const NGramCounts cr = Count(refs[i], n);
      for (const auto &[g, c] : ch) {
        const size_t r = CountOf(cr, g);
        const size_t s = CountOf(cs, g);
        h += static_cast<double>(c);
        m += static_cast<double>(std::min(c, r));
        const size_t hs = std::min(c, s);
        if (hs > r) d += static_cast<double>(hs - r);
      }
    }
    if (h == 0) continue;
    const double p = std::max(0.0, m - d) / h;
    if (p == 0) return 0.0;
    log_sum += std::log(p);
    ++used;
  }
  if (used == 0) return 0.0;
  const double bp = std::min(1.0, std::exp(1.0 - ref_len / hyp_len));
  return bp * std::exp(log_sum / used);
}

std::vector<Edit> ExtractEdits(const Sentence &source, const Sentence &hyp) {
  const size_t n = source.size(), m = hyp.size();
  std::vector<std::vector<size_t>> dp(n + 1, std::vector<size_t>(m + 1));
  for (size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      dp[i][j] = std::min({dp[i - 1][j - 1] + (source[i - 1] == hyp[j - 1] ? 0 : 1),
                           dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }
  // Backtrace from the end, so ties resolve in the order tried below.
  enum Op { kMatch, kSub, kDel, kIns };
  std::vector<Op> ops;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool eq = source[i - 1] == hyp[j - 1];
      if (dp[i][j] == dp[i - 1][j - 1] + (eq ? 0 : 1)) {
        ops.push_back(eq ? kMatch : kSub);
        --i, --j;
        continue;
      }
    }
    if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      ops.push_back(kDel);
      --i;
    } else {
      ops.push_back(kIns);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());

  std::vector<Edit> edits;
  bool open = false;
  i = 0, j = 0;
  for (Op op : ops) {
    if (op == kMatch) {
      open = false;
      ++i, ++j;
      continue;
    }
    if (!open) {
      edits.push_back(Edit{i, i, {}});
      open = true;
    }
    Edit &e = edits.back();
    if (op != kIns) e.end = ++i;
    if (op != kDel) e.replacement.push_back(hyp[j++]);
  }
  return edits;
}

PRF PrfFromCounts(size_t matched, size_t proposed, size_t gold) {
  PRF r;
  r.precision = proposed == 0 ? 1.0 : static_cast<double>(matched) / proposed;
  r.recall = gold == 0 ? 1.0 : static_cast<double>(matched) / gold;
  const double denom = 0.25 * r.precision + r.recall;
  r.f05 = (r.precision + r.recall == 0 || denom == 0)
              ? 0.0
              : 1.25 * r.precision * r.recall / denom;
  return r;
}

PRF EditF05(std::span<const Sentence> hyps, std::span<const Sentence> sources,
            std::span<const std::vector<Edit>> gold) {
  if (hyps.size() != sources.size() || hyps.size() != gold.size()) {
    throw ConfigError("edit F0.5: hypothesis, source and gold edit counts differ");
  }
  size_t matched = 0, proposed = 0, total_gold = 0;
  for (size_t i = 0; i < hyps.size(); ++i) {
    const std::vector<Edit> sys = ExtractEdits(sources[i], hyps[i]);
    const std::set<Edit> g(gold[i].begin(), gold[i].end());
    proposed += sys.size();
    total_gold += g.size();
    for (const Edit &e : sys) matched += g.count(e);
  }
  return PrfFromCounts(matched, proposed, total_gold);
}

double OracleErrorRate(const EvalCorpus &corpus, const std::function<Wfst(size_t)> &build) {
  size_t total = 0, missing = 0;
  for (size_t i = 0; i < corpus.sources.size(); ++i) {
    const Wfst h = build(i);
    for (const Sentence &ref : corpus.references[i]) {
      ++total;
      if (!OracleContains(h, ref)) ++missing;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(missing) / total;
}

namespace {

class PowellSearch {
 public:
  PowellSearch(const std::function<double(std::span<const double>)> &f, const PowellOptions &o)
      : f_(f), o_(o) {}

  double Eval(const std::vector<double> &x) {
    ++evals_;
    const double v = f_(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  }

  // Moves x along d if that strictly improves fx. Returns the gain.
  double LineSearch(std::vector<double> &x, double &fx, const std::vector<double> &d) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    bool any = false;
    for (size_t i = 0; i < x.size(); ++i) {
      if (std::abs(d[i]) < 1e-15) continue;
      any = true;
      double a = (o_.lower[i] - x[i]) / d[i];
      double b = (o_.upper[i] - x[i]) / d[i];
      if (a > b) std::swap(a, b);
      tmin = std::max(tmin, a);
      tmax = std::min(tmax, b);
    }
    if (!any || !(tmax - tmin > 1e-12)) return 0.0;

    auto at = [&](double t) {
      std::vector<double> y(x);
      for (size_t i = 0; i < y.size(); ++i) {
        y[i] = std::clamp(y[i] + t * d[i], o_.lower[i], o_.upper[i]);
      }
      return y;
    };
    double best_t = 0.0, best_v = fx;
    auto consider = [&](double t) {
      const double v = Eval(at(t));
      if (v > best_v) best_v = v, best_t = t;
      return v;
    };

    const int g = std::max(2, o_.grid);
    const double step = (tmax - tmin) / (g - 1);
    int best_k = -1;
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < g; ++k) {
      const double v = consider(tmin + k * step);
      if (v > grid_best) grid_best = v, best_k = k;
    }

    // Golden section inside the neighbouring grid cells.
    constexpr double kInvPhi = 0.6180339887498949;
    double a = tmin + std::max(0, best_k - 1) * step;
    double b = tmin + std::min(g - 1, best_k + 1) * step;
    double c = b - kInvPhi * (b - a), e = a + kInvPhi * (b - a);
    double fc = consider(c), fe = consider(e);
    for (int it = 0; it < 200 && (b - a) > o_.tolerance; ++it) {
      if (fc >= fe) {
        b = e, e = c, fe = fc;
        c = b - kInvPhi * (b - a);
        fc = consider(c);
      } else {
        a = c, c = e, fc = fe;
        e = a + kInvPhi * (b - a);
        fe = consider(e);
      }
    }

    if (best_v > fx) {
      const double gain = best_v - fx;
      x = at(best_t);
      fx = best_v;
      return gain;
    }
    return 0.0;
  }

  int evals() const { return evals_; }

 private:
  const std::function<double(std::span<const double>)> &f_;
  const PowellOptions &o_;
  int evals_ = 0;
};

}  // namespace

PowellResult PowellMaximize(const std::function<double(std::span<const double>)> &objective,
                            std::vector<double> init, const PowellOptions &opts_in) {
  PowellOptions opts = opts_in;
  const size_t dim = init.size();
  if (opts.lower.empty()) opts.lower.assign(dim, -1e9);
  if (opts.upper.empty()) opts.upper.assign(dim, 1e9);
  if (opts.lower.size() != dim || opts.upper.size() != dim) {
    throw ConfigError("Powell: bounds do not match the dimension");
  }
  for (size_t i = 0; i < dim; ++i) {
    if (!(opts.lower[i] <= opts.upper[i])) throw ConfigError("Powell: lower bound above upper");
  }
  if (opts.max_sweeps < 0 || opts.restarts < 1) {
    throw ConfigError("Powell: max_sweeps must be >= 0 and restarts >= 1");
  }

  PowellSearch search(objective, opts);
  PowellResult result;
  result.point = init;
  // Out-of-box starting coordinates are kept as given: the search only ever
  // moves to strictly better points, and `init` is the first of those.
  result.value = search.Eval(init);
  result.history.push_back({0, 0, result.value, init});
  if (opts.max_sweeps == 0) {
    result.evaluations = search.evals();
    return result;
  }

  std::vector<size_t> free;
  for (size_t i = 0; i < dim; ++i) {
    if (opts.upper[i] > opts.lower[i]) free.push_back(i);
  }
  std::mt19937 rng(opts.seed);

  for (int r = 0; r < opts.restarts && !free.empty(); ++r) {
    std::vector<double> x = init;
    double fx = result.value;
    if (r > 0) {
      for (size_t i : free) {
        x[i] = std::uniform_real_distribution<double>(opts.lower[i], opts.upper[i])(rng);
      }
      fx = search.Eval(x);
    }
    std::vector<std::vector<double>> dirs;
    for (size_t i : free) {
      std::vector<double> d(dim, 0.0);
      d[i] = 1.0;
      dirs.push_back(std::move(d));
    }
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
      const std::vector<double> x0 = x;
      const double f0 = fx;
      size_t biggest = 0;
      double biggest_gain = 0.0;
      for (size_t k = 0; k < dirs.size(); ++k) {
        const double gain = search.LineSearch(x, fx, dirs[k]);
        if (gain > biggest_gain) biggest_gain = gain, biggest = k;
      }
      std::vector<double> dn(dim);
      double norm = 0.0;
      for (size_t i = 0; i < dim; ++i) {
        dn[i] = x[i] - x0[i];
        norm += dn[i] * dn[i];
      }
      if (norm > 1e-18) {
        search.LineSearch(x, fx, dn);
        if (biggest_gain > 0.0 && dirs.size() > 1) {
          dirs.erase(dirs.begin() + static_cast<long>(biggest));
          dirs.push_back(dn);
        }
      }
      if (fx > result.value) {
        result.value = fx;
        result.point = x;
      }
      result.history.push_back({r, sweep, result.value, result.point});
      if (fx - f0 <= opts.tolerance * (1.0 + std::abs(f0))) break;
    }
  }
  result.evaluations = search.evals();
  return result;
}

LambdaTuneResult PowellTune(const std::function<double(const LambdaParams &)> &objective,
                            const LambdaParams &init, std::span<const size_t> free, double lower,
                            double upper, const PowellOptions &opts_in) {
  for (size_t i : free) {
    if (i >= kLambdaNames.size()) throw ConfigError("unknown lambda index " + std::to_string(i));
  }
  PowellOptions opts = opts_in;
  std::vector<double> x0(free.size());
  for (size_t k = 0; k < free.size(); ++k) x0[k] = LambdaGet(init, free[k]);
  opts.lower.assign(free.size(), lower);
  opts.upper.assign(free.size(), upper);
  auto to_params = [&](std::span<const double> x) {
    LambdaParams p = init;
    for (size_t k = 0; k < free.size(); ++k) LambdaRef(p, free[k]) = x[k];
    return p;
  };
  LambdaTuneResult out;
  out.search = PowellMaximize([&](std::span<const double> x) { return objective(to_params(x)); },
                              x0, opts);
  out.best = to_params(out.search.point);
  out.value = out.search.value;
  return out;
}

}  // namespace gecfst
