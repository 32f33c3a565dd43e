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

// Metrics: SQuAD-style answer F1 with per-year macro averages, masked-span
// perplexity, year-gap curves, duration buckets, log-likelihood drift into
// the future and closed-set entropy.

#ifndef TPROBE_EVALUATOR_H_
#define TPROBE_EVALUATOR_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tprobe/model.h"
#include "tprobe/templama.h"

namespace tprobe {

// Lowercase, drop ASCII punctuation, drop the articles a/an/the, collapse
// whitespace.
std::string NormalizeAnswer(std::string_view s);
std::vector<std::string> AnswerTokens(std::string_view s);

// Bag-of-tokens F1 on normalized text. Both empty gives 1, one empty 0.
double TokenF1(std::string_view prediction, std::string_view gold);
// Best TokenF1 over the golds. Throws ValidationError if golds is empty.
double MaxF1(std::string_view prediction, const std::vector<std::string> &golds);

// How the query year reaches the model besides the year argument.
enum class InputStyle {
  kPlain,       // text unchanged
  kTimePrefix,  // "year: 2014 " + text
  kInYear,      // "In 2014, " + text
};
InputStyle ParseInputStyle(std::string_view name);
std::string_view InputStyleName(InputStyle style);
std::string RenderInput(const std::string &text, int year, InputStyle style);

struct QueryF1 {
  std::string id;
  int year = 0;
  double f1 = 0.0;
  std::string prediction;
  std::string error;  // set when the model failed; f1 is then 0
};

struct F1Result {
  std::vector<QueryF1> per_query;
  std::map<int, double> per_year;
  double macro = 0.0;
  // Macro averages restricted to the seen and future year ranges; absent
  // when no evaluated year falls in the range.
  std::optional<double> seen_macro;
  std::optional<double> future_macro;
  size_t failures = 0;
};

// Unweighted mean of the values. Throws ValidationError if empty.
double MacroAverage(const std::map<int, double> &per_year);

// Fills per_year (query-weighted within a year), macro and the seen/future
// partitions from per_query.
void Aggregate(F1Result &result, const YearRange &seen, const YearRange &future);

struct EvalOptions {
  YearRange seen{2010, 2018};
  YearRange future{2019, 2020};
  InputStyle style = InputStyle::kPlain;
};

// Top-1 prediction per query scored with MaxF1. A failing query is recorded
// with f1 = 0 and does not abort the run.
F1Result EvaluateF1(const Model &model, const std::vector<ClozeQuery> &queries,
                    const EvalOptions &options = {});

// exp(-sum log P / sum len). Throws ValidationError on empty input or a
// target length below 1.
double MlmPerplexity(const std::vector<SpanScore> &scores);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap interval for the mean of `values`.
// With R resamples the bounds are the order statistics at floor(0.025 R) and
// ceil(0.975 R) - 1 of the sorted replicate values.
Interval BootstrapInterval(const std::vector<double> &values, size_t resamples,
                           uint64_t seed);

// F1 scores of one expert on one test year.
struct PairScores {
  int train_year = 0;
  int test_year = 0;
  std::vector<double> f1;
};

struct GapPoint {
  double mean = 0.0;  // mean over (train, test) pairs of the pair mean F1
  size_t pairs = 0;
  size_t queries = 0;
  Interval ci;
};

using GapCurve = std::map<int, GapPoint>;

// Groups pairs by test_year - train_year. The interval resamples queries
// within each pair and recomputes the mean of pair means.
GapCurve AggregateGapCurve(const std::vector<PairScores> &pairs,
                           size_t resamples = 1000, uint64_t seed = 0);

// Every expert on every test year. Throws ValidationError with fewer than 2
// experts or a missing test set for an expert year.
GapCurve ComputeGapCurve(const std::map<int, const Model *> &experts,
                         const std::map<int, std::vector<ClozeQuery>> &test_sets,
                         const EvalOptions &options = {}, size_t resamples = 1000,
                         uint64_t seed = 0);

struct BucketStat {
  double mean = 0.0;
  size_t count = 0;
  Interval ci;
};

// Buckets 1..cap by duration_years, the last one holding everything >= cap.
std::map<int, BucketStat> DurationBuckets(const F1Result &result,
                                          const std::vector<ClozeQuery> &queries,
                                          int cap = 9, size_t resamples = 1000,
                                          uint64_t seed = 0);

// A query answered correctly at the anchor year together with that answer.
struct AnchorQuery {
  std::string text;
  std::string answer;
  bool multiple = false;  // the (subject, relation) has several answers overall
};

// Queries from `anchor_year` whose top-1 prediction is a gold answer.
// Multiplicity counts distinct answers of the same (subject, relation) over
// all of `queries`.
std::vector<AnchorQuery> SelectAnchorQueries(const Model &model,
                                             const std::vector<ClozeQuery> &queries,
                                             int anchor_year,
                                             InputStyle style = InputStyle::kPlain);

struct LoglikPoint {
  int year = 0;
  double delta = 0.0;
  size_t count = 0;
};

// For t in anchor..anchor+horizon: mean of log P(answer | x, t) -
// log P(answer | x, anchor), keyed "single" and "multiple". The anchor row
// is 0 by construction.
std::map<std::string, std::vector<LoglikPoint>> FutureLoglikCurve(
    const Model &model, const std::vector<AnchorQuery> &queries, int anchor_year,
    int horizon, InputStyle style = InputStyle::kPlain);

// -sum p ln p in nats; zero entries contribute nothing.
double Entropy(const std::vector<double> &probs);

std::vector<std::pair<int, double>> ClosedSetEntropy(
    const Model &model, const std::string &text,
    const std::vector<std::string> &candidates, const std::vector<int> &years,
    InputStyle style = InputStyle::kPlain);

// category -> (year, mean entropy).
using EntropyCurve = std::map<std::string, std::vector<std::pair<int, double>>>;

}  // namespace tprobe

#endif  // TPROBE_EVALUATOR_H_
