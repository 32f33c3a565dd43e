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

// A seeded synthetic world whose facts change at known rates, with a dated
// news-like corpus describing it. Used as a fixture for the experiment
// flows and as a stand-in when no real fact or document files are given.

#ifndef TPROBE_SYNTHETIC_H_
#define TPROBE_SYNTHETIC_H_

#include <map>
#include <string>
#include <vector>

#include "tprobe/corpus.h"
#include "tprobe/diagnostics.h"
#include "tprobe/fact_store.h"
#include "tprobe/templama.h"

namespace tprobe {

struct DriftWorldOptions {
  size_t changing_subjects = 200;
  size_t control_subjects = 40;
  // Each changing subject switches object every `period` years, drawn
  // uniformly from [min_period, max_period], with a random phase.
  int min_period = 1;
  int max_period = 5;
  YearRange period{2010, 2020};
  size_t objects_per_relation = 30;
  int docs_per_year = 24;
  uint64_t seed = 1;

  void Validate() const;
};

struct WorldSubject {
  std::string id;
  std::string name;
  std::string relation_id;
  int change_period = 0;  // 0 for subjects whose object never changes
  ProbeCategory category = ProbeCategory::kNever;
};

struct DriftWorld {
  DriftWorldOptions options;
  std::vector<RelationTemplate> templates;
  std::vector<WorldSubject> subjects;
  std::vector<TemporalFact> facts;
  // Every object name in the world, sorted; the closed candidate set.
  std::vector<std::string> object_names;
  // Subject and object names; the gazetteer for the corpus.
  std::vector<std::string> entity_names;
  // One query per subject and in-period year.
  std::vector<ClozeQuery> queries;
  std::vector<TimestampedDoc> docs;

  FactStore Store() const { return FactStore(facts, options.period); }
  // Category by subject id.
  std::map<std::string, ProbeCategory> Categories() const;
};

// Frequent: period 1-2. Rare: 3 and above. Never: no change.
ProbeCategory CategoryForPeriod(int change_period);

// Deterministic in the options. Templates come from templates.tsv in the
// data directory.
DriftWorld BuildDriftWorld(const DriftWorldOptions &options);

// Runs the world's documents through the corpus pipeline with a gazetteer
// of its entity names.
std::vector<MaskedExample> DriftWorldCorpus(const DriftWorld &world, MaskPolicy policy,
                                            uint64_t seed, CorpusStats *stats = nullptr);

// Queries whose year lies in `years`.
std::vector<ClozeQuery> QueriesInYears(const std::vector<ClozeQuery> &queries,
                                       const YearRange &years);

}  // namespace tprobe

#endif  // TPROBE_SYNTHETIC_H_
