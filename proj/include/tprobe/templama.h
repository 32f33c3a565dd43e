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

// Builds year-scoped cloze probes from a fact store: relation templates,
// subject selection, per-year expansion and subject-disjoint splits.

#ifndef TPROBE_TEMPLAMA_H_
#define TPROBE_TEMPLAMA_H_

#include <set>
#include <string>
#include <vector>

#include "tprobe/fact_store.h"

namespace tprobe {

class RelationTemplate {
 public:
  // Throws ValidationError unless the pattern has exactly one <subject> and
  // one <object> placeholder.
  RelationTemplate(std::string relation_id, std::string pattern);

  const std::string &relation_id() const { return relation_id_; }
  const std::string &pattern() const { return pattern_; }

  // Subject name in, mask literal in place of the object.
  std::string Render(const std::string &subject_name) const;
  // Both names filled in; used to write corpus sentences.
  std::string RenderFact(const std::string &subject_name,
                         const std::string &object_name) const;

 private:
  std::string relation_id_;
  std::string pattern_;
};

// TSV "relation_id<TAB>pattern", optional header row.
std::vector<RelationTemplate> ParseTemplates(std::string_view contents,
                                             const std::string &source);
std::vector<RelationTemplate> LoadTemplates(const std::string &path);

struct ClozeQuery {
  std::string id;
  int year = 0;
  std::string text;
  std::vector<std::string> answers;
  std::string relation_id;
  std::string subject_id;
  int duration_years = 1;

  friend bool operator==(const ClozeQuery &, const ClozeQuery &) = default;
};

struct SplitFractions {
  double train = 0.2;
  double validation = 0.1;
  double test = 0.7;

  // "0.2,0.1,0.7"
  static SplitFractions Parse(std::string_view text);
  void Validate() const;
  std::string ToString() const;

  friend bool operator==(const SplitFractions &, const SplitFractions &) = default;
};

struct DatasetSplit {
  std::vector<ClozeQuery> train;
  std::vector<ClozeQuery> validation;
  std::vector<ClozeQuery> test;
  SplitFractions fractions;
};

// Stable id derived from (subject, relation, year).
std::string QueryId(const std::string &subject_id,
                    const std::string &relation_id, int year);

// Pairs with at least two distinct objects whose resolved intervals differ.
std::set<SubjectRelation> SelectProbePairs(const FactStore &store);

// Subjects of one relation ranked by fact count, ties by subject id.
std::vector<std::string> SelectTopSubjects(const FactStore &store,
                                           const std::string &relation_id,
                                           size_t k);

// One query per (pair, year) for every in-period year covered by the pair's
// facts. Answers are all objects active that year, ordered by interval start
// then name. Throws ValidationError if a pair's relation has no template.
std::vector<ClozeQuery> ExpandQueries(const FactStore &store,
                                      const std::vector<RelationTemplate> &templates,
                                      const std::set<SubjectRelation> &pairs);

// Random subject-level partition whose query mass tracks the fractions.
// Throws ValidationError with fewer than 3 subjects.
DatasetSplit SplitBySubject(const std::vector<ClozeQuery> &queries,
                            const SplitFractions &fractions, uint64_t seed);

struct TemplamaOptions {
  size_t top_k = 1000;
  SplitFractions fractions;
  uint64_t seed = 0;
};

struct TemplamaBuild {
  std::set<SubjectRelation> pairs;
  std::vector<ClozeQuery> queries;
  DatasetSplit split;
};

// select pairs -> top-k subjects per relation -> expand -> split.
TemplamaBuild BuildTemplama(const FactStore &store,
                            const std::vector<RelationTemplate> &templates,
                            const TemplamaOptions &options);

// JSONL with keys id, year, query, answer, relation, subject_id, duration.
std::string QueriesToJsonl(const std::vector<ClozeQuery> &queries);
// Also accepts the released dataset layout: "date" instead of "year" and
// answers given as {"name": ...} objects.
std::vector<ClozeQuery> ParseQueriesJsonl(std::string_view contents,
                                          const std::string &source);
std::vector<ClozeQuery> LoadQueries(const std::string &path);

}  // namespace tprobe

#endif  // TPROBE_TEMPLAMA_H_
