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

// Run configuration: a flat "key = value" file. Lines starting with '#'
// are comments. Unknown keys are errors.

#ifndef TPROBE_CONFIG_H_
#define TPROBE_CONFIG_H_

#include <string>
#include <vector>

#include "tprobe/common.h"
#include "tprobe/evaluator.h"
#include "tprobe/model.h"
#include "tprobe/templama.h"

namespace tprobe {

struct RunConfig {
  YearRange period{2010, 2020};
  YearRange train_years{2010, 2018};
  YearRange future_years{2019, 2020};
  uint64_t seed = 1;
  Regime regime = Regime::kTemporal;
  double smoothing_k = 0.1;
  double lambda = 0.8;
  SplitFractions split;
  int mix_corpus = 1000;
  int mix_probe = 1;
  double alpha = 0.5;
  std::vector<double> alpha_grid{0.0, 0.1, 0.25, 0.5, 0.6, 0.75, 1.0};
  size_t steps = 200000;
  size_t adapt_steps = 0;  // 0 means steps / 6
  double adapt_forgetting = 5.0;
  YearRange adapt_new_slice{2019, 2019};
  size_t top_k = 1000;
  InputStyle input_style = InputStyle::kPlain;
  size_t bootstrap_resamples = 1000;
  int duration_cap = 9;
  int horizon = 4;
  YearRange calib_years{2019, 2022};

  // Drift world used when no fact/document files are given.
  size_t world_subjects = 200;
  size_t world_controls = 40;
  int world_min_period = 1;
  int world_max_period = 5;
  size_t world_objects = 30;
  int world_docs_per_year = 24;

  // Optional real inputs. Empty means "use the drift world".
  std::string facts;
  std::string docs;
  std::string templates;  // empty: shipped templates.tsv
  std::string tagger;     // empty: gazetteer of the fact store's names
  std::string future_probes;  // empty: shipped future_relations.tsv

  size_t date_pairs = 10000;
  size_t date_train_pairs = 50000;
  YearRange date_years{2010, 2020};
  std::vector<std::string> date_coarse_formats{"year", "month_year"};

  size_t ContinuationSteps() const { return adapt_steps ? adapt_steps : steps / 6; }

  // Throws ValidationError naming the offending field.
  void Validate() const;
  std::string Serialize() const;
  static RunConfig Parse(std::string_view text, const std::string &source);
  static RunConfig Load(const std::string &path);
  // Applies one "key = value" assignment.
  void Set(const std::string &key, const std::string &value);

  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

// Shortest decimal that parses back to the same double.
std::string FormatShortest(double value);

}  // namespace tprobe

#endif  // TPROBE_CONFIG_H_
