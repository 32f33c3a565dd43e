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

// End-to-end experiment flows. Each flow returns its results and
// RunExperiment additionally writes them, with a manifest, to a directory.

#ifndef TPROBE_EXPERIMENTS_H_
#define TPROBE_EXPERIMENTS_H_

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tprobe/config.h"
#include "tprobe/corpus.h"
#include "tprobe/count_model.h"
#include "tprobe/diagnostics.h"
#include "tprobe/evaluator.h"
#include "tprobe/templama.h"

namespace tprobe {

inline constexpr std::string_view kVersion = "0.3.0";

// A cloze probe with a category, used for the entropy curves.
struct CategorizedProbe {
  std::string text;
  ProbeCategory category = ProbeCategory::kNever;
};

struct ExperimentData {
  bool synthetic = true;
  std::vector<MaskedExample> corpus;  // every year of the period
  CorpusStats corpus_stats;
  std::vector<ClozeQuery> queries;
  DatasetSplit split;
  std::vector<std::string> candidates;  // closed answer set
  std::vector<CategorizedProbe> probes;  // drift world only
  // Input files read, by role.
  std::map<std::string, std::string> inputs;
};

ExperimentData PrepareData(const RunConfig &config);

// (subject, relation) pairs with more than one distinct answer in `queries`.
std::set<SubjectRelation> MultiAnswerPairs(const std::vector<ClozeQuery> &queries);

// Re-aggregates the queries of `result` whose id is in `ids`.
F1Result SubsetF1(const F1Result &result, const std::set<std::string> &ids,
                  const EvalOptions &options);

// Trains one regime on the corpus examples of `years`, interleaved with
// the train-split probes of those years at the configured ratio. Yearly
// gets one expert per year.
TemporalCountModel TrainRegime(const RunConfig &config, const ExperimentData &data,
                               Regime regime, const YearRange &years, size_t steps);

EvalOptions EvalOptionsFor(const RunConfig &config);

struct MemorizeResult {
  std::map<std::string, F1Result> f1;  // by regime name
  // regime -> "multiple" / "single" -> macro F1
  std::map<std::string, std::map<std::string, double>> group_macro;
  GapCurve gap;
  std::map<std::string, std::map<int, BucketStat>> durations;
};
MemorizeResult RunMemorize(const RunConfig &config, const ExperimentData &data);

struct DegradeResult {
  std::map<std::string, std::map<std::string, std::vector<LoglikPoint>>> loglik;
  std::map<std::string, std::map<int, double>> perplexity;
  std::map<std::string, size_t> anchors;
};
DegradeResult RunDegrade(const RunConfig &config, const ExperimentData &data);

// Mean entropy per category and year over `probes`.
EntropyCurve ProbeEntropyCurve(const Model &model, const std::vector<CategorizedProbe> &probes,
                               const std::vector<std::string> &candidates,
                               const std::vector<int> &years, InputStyle style);

struct CalibrateResult {
  // "<regime>/<probe set>" -> curve
  std::vector<std::pair<std::string, EntropyCurve>> curves;
};
CalibrateResult RunCalibrate(const RunConfig &config, const ExperimentData &data);

struct AdaptRow {
  std::string regime;
  double alpha = 0.0;
  double base_old_f1 = 0.0;
  double base_new_f1 = 0.0;
  double old_f1 = 0.0;
  double new_f1 = 0.0;
  double new_fraction = 0.0;  // share of continuation draws from the new slice
  double degradation() const { return base_old_f1 - old_f1; }
};
struct AdaptResult {
  std::vector<AdaptRow> rows;
  size_t continuation_steps = 0;
  double decay = 0.0;
};
AdaptResult RunAdapt(const RunConfig &config, const ExperimentData &data);

struct DiagnoseResult {
  DateReport coarse;        // coarse formats, model trained on coarse pairs
  DateReport all_formats;   // all formats, model trained on all formats
  DateReport coarse_ambiguous;  // all-format eval with ambiguous pairs scored apart
  std::vector<DatePair> eval_pairs;
};
DiagnoseResult RunDiagnose(const RunConfig &config);

inline const std::vector<std::string> &FlowNames() {
  static const std::vector<std::string> names = {"memorize", "degrade", "calibrate", "adapt",
                                                 "diagnose"};
  return names;
}

// Runs one flow and writes report.json, the flow's CSV files, config.txt
// and manifest.json into out_dir. Throws ValidationError for an unknown
// flow or bad config.
void RunExperiment(const RunConfig &config, const std::string &flow, const std::string &out_dir);

// manifest.json contents: flow, seed, config, input hashes, version.
std::string ManifestJson(const RunConfig &config, const std::string &flow,
                         const std::map<std::string, std::string> &inputs);

}  // namespace tprobe

#endif  // TPROBE_EXPERIMENTS_H_
