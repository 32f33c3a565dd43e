// Copyright 2026 The tprobe Authors.
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

#include "tprobe/evaluator.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tprobe/corpus.h"

namespace tprobe {

namespace {

// Non-ASCII bytes count as word characters so UTF-8 letters stay intact.
bool IsWordByte(unsigned char c) { return c >= 0x80 || std::isalnum(c) || c == '_'; }

double Mean(const std::vector<double> &v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

Interval PercentileInterval(std::vector<double> stats) {
  if (stats.empty()) return {};
  std::sort(stats.begin(), stats.end());
  const size_t r = stats.size();
  size_t lo = static_cast<size_t>(std::floor(0.025 * static_cast<double>(r)));
  size_t hi = static_cast<size_t>(std::ceil(0.975 * static_cast<double>(r)));
  hi = hi == 0 ? 0 : hi - 1;
  return {stats[std::min(lo, r - 1)], stats[std::min(hi, r - 1)]};
}

}  // namespace

std::string NormalizeAnswer(std::string_view s) {
  std::string text;
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::ispunct(c)) continue;
    text += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
  }
  std::string no_articles;
  for (size_t i = 0; i < text.size();) {
    if (!IsWordByte(static_cast<unsigned char>(text[i]))) {
      no_articles += text[i++];
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view word(text.data() + i, j - i);
    no_articles += (word == "a" || word == "an" || word == "the") ? std::string(" ")
                                                                  : std::string(word);
    i = j;
  }
  std::vector<std::string> tokens;
  std::string token;
  for (char c : no_articles) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) tokens.push_back(std::move(token));
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) tokens.push_back(std::move(token));
  return Join(tokens, " ");
}

std::vector<std::string> AnswerTokens(std::string_view s) {
  std::string norm = NormalizeAnswer(s);
  if (norm.empty()) return {};
  return Split(norm, ' ');
}

double TokenF1(std::string_view prediction, std::string_view gold) {
  std::vector<std::string> pred = AnswerTokens(prediction);
  std::vector<std::string> ref = AnswerTokens(gold);
  if (pred.empty() || ref.empty()) return pred.empty() && ref.empty() ? 1.0 : 0.0;
  std::unordered_map<std::string, int> bag;
  for (const std::string &t : ref) ++bag[t];
  int same = 0;
  for (const std::string &t : pred) {
    auto it = bag.find(t);
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++same;
    }
  }
  if (same == 0) return 0.0;
  double precision = static_cast<double>(same) / static_cast<double>(pred.size());
  double recall = static_cast<double>(same) / static_cast<double>(ref.size());
  return 2.0 * precision * recall / (precision + recall);
}

double MaxF1(std::string_view prediction, const std::vector<std::string> &golds) {
  if (golds.empty()) throw ValidationError("max F1 needs at least one gold answer");
  double best = 0.0;
  for (const std::string &g : golds) best = std::max(best, TokenF1(prediction, g));
  return best;
}

InputStyle ParseInputStyle(std::string_view name) {
  if (name == "plain") return InputStyle::kPlain;
  if (name == "time-prefix") return InputStyle::kTimePrefix;
  if (name == "in-year") return InputStyle::kInYear;
  throw ValidationError("unknown input style '" + std::string(name) +
                        "' (plain, time-prefix or in-year)");
}

std::string_view InputStyleName(InputStyle style) {
  switch (style) {
    case InputStyle::kPlain: return "plain";
    case InputStyle::kTimePrefix: return "time-prefix";
    case InputStyle::kInYear: return "in-year";
  }
  return "?";
}

std::string RenderInput(const std::string &text, int year, InputStyle style) {
  switch (style) {
    case InputStyle::kPlain: return text;
    case InputStyle::kTimePrefix: return "year: " + std::to_string(year) + " " + text;
    case InputStyle::kInYear: return "In " + std::to_string(year) + ", " + text;
  }
  return text;
}

double MacroAverage(const std::map<int, double> &per_year) {
  if (per_year.empty()) throw ValidationError("nothing to macro-average");
  double sum = 0.0;
  for (const auto &[year, value] : per_year) sum += value;
  return sum / static_cast<double>(per_year.size());
}

void Aggregate(F1Result &result, const YearRange &seen, const YearRange &future) {
  std::map<int, std::pair<double, size_t>> sums;
  result.failures = 0;
  for (const QueryF1 &q : result.per_query) {
    auto &[sum, n] = sums[q.year];
    sum += q.f1;
    ++n;
    if (!q.error.empty()) ++result.failures;
  }
  result.per_year.clear();
  std::map<int, double> seen_years, future_years;
  for (const auto &[year, acc] : sums) {
    double mean = acc.first / static_cast<double>(acc.second);
    result.per_year[year] = mean;
    if (seen.Contains(year)) seen_years[year] = mean;
    if (future.Contains(year)) future_years[year] = mean;
  }
  result.macro = result.per_year.empty() ? 0.0 : MacroAverage(result.per_year);
  result.seen_macro.reset();
  result.future_macro.reset();
  if (!seen_years.empty()) result.seen_macro = MacroAverage(seen_years);
  if (!future_years.empty()) result.future_macro = MacroAverage(future_years);
}

F1Result EvaluateF1(const Model &model, const std::vector<ClozeQuery> &queries,
                    const EvalOptions &options) {
  F1Result result;
  result.per_query.reserve(queries.size());
  for (const ClozeQuery &q : queries) {
    QueryF1 row{q.id, q.year, 0.0, "", ""};
    try {
      std::vector<RankedAnswer> top =
          model.Predict(RenderInput(q.text, q.year, options.style), q.year, 1);
      if (!top.empty()) row.prediction = top.front().answer;
      row.f1 = MaxF1(row.prediction, q.answers);
    } catch (const std::exception &e) {
      row.error = e.what();
      row.f1 = 0.0;
    }
    result.per_query.push_back(std::move(row));
  }
  Aggregate(result, options.seen, options.future);
  return result;
}

double MlmPerplexity(const std::vector<SpanScore> &scores) {
  if (scores.empty()) throw ValidationError("perplexity needs at least one span");
  double log_sum = 0.0;
  double len_sum = 0.0;
  for (const SpanScore &s : scores) {
    if (s.target_len < 1) throw ValidationError("span target length below 1");
    log_sum += s.log_prob;
    len_sum += s.target_len;
  }
  return std::exp(-log_sum / len_sum);
}

Interval BootstrapInterval(const std::vector<double> &values, size_t resamples,
                           uint64_t seed) {
  if (values.empty() || resamples == 0) return {};
  Rng rng(seed);
  std::vector<double> stats;
  stats.reserve(resamples);
  for (size_t r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (size_t i = 0; i < values.size(); ++i) sum += values[rng.UniformIndex(values.size())];
    stats.push_back(sum / static_cast<double>(values.size()));
  }
  return PercentileInterval(std::move(stats));
}

GapCurve AggregateGapCurve(const std::vector<PairScores> &pairs, size_t resamples,
                           uint64_t seed) {
  std::map<int, std::vector<const PairScores *>> by_gap;
  for (const PairScores &p : pairs) {
    if (p.f1.empty()) continue;
    by_gap[p.test_year - p.train_year].push_back(&p);
  }
  GapCurve curve;
  for (const auto &[gap, members] : by_gap) {
    GapPoint point;
    double sum = 0.0;
    for (const PairScores *p : members) {
      sum += Mean(p->f1);
      point.queries += p->f1.size();
    }
    point.pairs = members.size();
    point.mean = sum / static_cast<double>(members.size());
    Rng rng(DeriveSeed(seed, "gap" + std::to_string(gap)));
    std::vector<double> stats;
    stats.reserve(resamples);
    for (size_t r = 0; r < resamples; ++r) {
      double total = 0.0;
      for (const PairScores *p : members) {
        double s = 0.0;
        for (size_t i = 0; i < p->f1.size(); ++i) s += p->f1[rng.UniformIndex(p->f1.size())];
        total += s / static_cast<double>(p->f1.size());
      }
      stats.push_back(total / static_cast<double>(members.size()));
    }
    point.ci = PercentileInterval(std::move(stats));
    curve[gap] = point;
  }
  return curve;
}

GapCurve ComputeGapCurve(const std::map<int, const Model *> &experts,
                         const std::map<int, std::vector<ClozeQuery>> &test_sets,
                         const EvalOptions &options, size_t resamples, uint64_t seed) {
  if (experts.size() < 2) throw ValidationError("gap curve needs at least 2 experts");
  for (const auto &[year, model] : experts) {
    if (!test_sets.count(year)) {
      throw ValidationError("no test set for expert year " + std::to_string(year));
    }
  }
  std::vector<PairScores> pairs;
  for (const auto &[train_year, model] : experts) {
    for (const auto &[test_year, queries] : test_sets) {
      F1Result r = EvaluateF1(*model, queries, options);
      PairScores p{train_year, test_year, {}};
      for (const QueryF1 &q : r.per_query) p.f1.push_back(q.f1);
      pairs.push_back(std::move(p));
    }
  }
  return AggregateGapCurve(pairs, resamples, seed);
}

std::map<int, BucketStat> DurationBuckets(const F1Result &result,
                                          const std::vector<ClozeQuery> &queries,
                                          int cap, size_t resamples, uint64_t seed) {
  if (cap < 1) throw ValidationError("duration cap must be >= 1");
  std::unordered_map<std::string, int> duration;
  for (const ClozeQuery &q : queries) duration[q.id] = q.duration_years;
  std::map<int, std::vector<double>> groups;
  for (const QueryF1 &q : result.per_query) {
    auto it = duration.find(q.id);
    if (it == duration.end()) {
      throw ValidationError("query " + q.id + " has no duration metadata");
    }
    groups[std::clamp(it->second, 1, cap)].push_back(q.f1);
  }
  std::map<int, BucketStat> out;
  for (const auto &[bucket, values] : groups) {
    out[bucket] = {Mean(values), values.size(),
                   BootstrapInterval(values, resamples,
                                     DeriveSeed(seed, "bucket" + std::to_string(bucket)))};
  }
  return out;
}

std::vector<AnchorQuery> SelectAnchorQueries(const Model &model,
                                             const std::vector<ClozeQuery> &queries,
                                             int anchor_year, InputStyle style) {
  std::map<SubjectRelation, std::set<std::string>> answers;
  for (const ClozeQuery &q : queries) {
    answers[{q.subject_id, q.relation_id}].insert(q.answers.begin(), q.answers.end());
  }
  std::vector<AnchorQuery> out;
  for (const ClozeQuery &q : queries) {
    if (q.year != anchor_year) continue;
    std::vector<RankedAnswer> top = model.Predict(RenderInput(q.text, q.year, style), q.year, 1);
    if (top.empty()) continue;
    if (std::find(q.answers.begin(), q.answers.end(), top.front().answer) == q.answers.end()) {
      continue;
    }
    out.push_back({q.text, top.front().answer,
                   answers[{q.subject_id, q.relation_id}].size() > 1});
  }
  return out;
}

std::map<std::string, std::vector<LoglikPoint>> FutureLoglikCurve(
    const Model &model, const std::vector<AnchorQuery> &queries, int anchor_year,
    int horizon, InputStyle style) {
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  std::map<std::string, std::vector<LoglikPoint>> out;
  for (const char *group : {"single", "multiple"}) {
    const bool multiple = std::string_view(group) == "multiple";
    std::vector<const AnchorQuery *> members;
    for (const AnchorQuery &q : queries) {
      if (q.multiple == multiple) members.push_back(&q);
    }
    std::vector<double> base;
    for (const AnchorQuery *q : members) {
      base.push_back(
          model.Score(RenderInput(q->text, anchor_year, style), anchor_year, q->answer).log_prob);
    }
    std::vector<LoglikPoint> &series = out[group];
    for (int t = anchor_year; t <= anchor_year + horizon; ++t) {
      LoglikPoint point{t, 0.0, members.size()};
      if (t != anchor_year && !members.empty()) {
        double sum = 0.0;
        for (size_t i = 0; i < members.size(); ++i) {
          const AnchorQuery *q = members[i];
          sum += model.Score(RenderInput(q->text, t, style), t, q->answer).log_prob - base[i];
        }
        point.delta = sum / static_cast<double>(members.size());
      }
      series.push_back(point);
    }
  }
  return out;
}

double Entropy(const std::vector<double> &probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<std::pair<int, double>> ClosedSetEntropy(
    const Model &model, const std::string &text, const std::vector<std::string> &candidates,
    const std::vector<int> &years, InputStyle style) {
  std::vector<std::pair<int, double>> out;
  for (int year : years) {
    out.emplace_back(
        year, Entropy(model.CandidateDistribution(RenderInput(text, year, style), year,
                                                  candidates)));
  }
  return out;
}

}  // namespace tprobe
