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

#include "tprobe/templama.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tprobe {

namespace {

constexpr std::string_view kSubject = "<subject>";
constexpr std::string_view kObject = "<object>";

std::string ReplaceOnce(std::string text, std::string_view from,
                        std::string_view to) {
  size_t pos = text.find(from);
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

}  // namespace

RelationTemplate::RelationTemplate(std::string relation_id, std::string pattern)
    : relation_id_(std::move(relation_id)), pattern_(std::move(pattern)) {
  if (relation_id_.empty()) throw ValidationError("template with empty relation id");
  if (CountOccurrences(pattern_, kSubject) != 1 ||
      CountOccurrences(pattern_, kObject) != 1) {
    throw ValidationError("template for " + relation_id_ +
                          " needs exactly one <subject> and one <object>: '" +
                          pattern_ + "'");
  }
}

std::string RelationTemplate::Render(const std::string &subject_name) const {
  // Substitute the object first so a subject name cannot inject a placeholder.
  std::string out = ReplaceOnce(pattern_, kObject, kMaskLiteral);
  return ReplaceOnce(std::move(out), kSubject, subject_name);
}

std::string RelationTemplate::RenderFact(const std::string &subject_name,
                                         const std::string &object_name) const {
  size_t s = pattern_.find(kSubject);
  size_t o = pattern_.find(kObject);
  std::string out;
  if (s < o) {
    out = pattern_.substr(0, s) + subject_name +
          pattern_.substr(s + kSubject.size(), o - s - kSubject.size()) +
          object_name + pattern_.substr(o + kObject.size());
  } else {
    out = pattern_.substr(0, o) + object_name +
          pattern_.substr(o + kObject.size(), s - o - kObject.size()) +
          subject_name + pattern_.substr(s + kSubject.size());
  }
  return out;
}

std::vector<RelationTemplate> ParseTemplates(std::string_view contents,
                                             const std::string &source) {
  std::vector<RelationTemplate> templates;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string> fields = Split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(source, row, 1, "expected relation_id<TAB>pattern");
    }
    if (row == 1 && fields[0] == "relation_id") continue;
    try {
      templates.emplace_back(std::string(Trim(fields[0])),
                             std::string(Trim(fields[1])));
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 2, e.what());
    }
  }
  return templates;
}

std::vector<RelationTemplate> LoadTemplates(const std::string &path) {
  return ParseTemplates(ReadFile(path), path);
}

SplitFractions SplitFractions::Parse(std::string_view text) {
  std::vector<std::string> parts = Split(text, ',');
  if (parts.size() != 3) {
    throw ValidationError("split must be three comma-separated fractions, got '" +
                          std::string(text) + "'");
  }
  SplitFractions f{ParseDouble(parts[0], "train fraction"),
                   ParseDouble(parts[1], "validation fraction"),
                   ParseDouble(parts[2], "test fraction")};
  f.Validate();
  return f;
}

void SplitFractions::Validate() const {
  if (train < 0 || validation < 0 || test < 0) {
    throw ValidationError("split fractions must be non-negative");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw ValidationError("split fractions must sum to 1, got " + ToString());
  }
}

std::string SplitFractions::ToString() const {
  std::ostringstream out;
  out << train << "," << validation << "," << test;
  return out.str();
}

std::string QueryId(const std::string &subject_id,
                    const std::string &relation_id, int year) {
  std::string key = subject_id + '\x1f' + relation_id + '\x1f' + std::to_string(year);
  return HexId(StableHash(key));
}

std::set<SubjectRelation> SelectProbePairs(const FactStore &store) {
  std::set<SubjectRelation> pairs;
  for (const SubjectRelation &pair : store.Pairs()) {
    std::span<const size_t> ids = store.FactsFor(pair.first, pair.second);
    bool varies = false;
    for (size_t a = 0; a < ids.size() && !varies; ++a) {
      for (size_t b = a + 1; b < ids.size() && !varies; ++b) {
        const TemporalFact &fa = store.facts()[ids[a]];
        const TemporalFact &fb = store.facts()[ids[b]];
        varies = fa.object_id != fb.object_id &&
                 fa.interval.Resolve(store.period()) !=
                     fb.interval.Resolve(store.period());
      }
    }
    if (varies) pairs.insert(pair);
  }
  return pairs;
}

std::vector<std::string> SelectTopSubjects(const FactStore &store,
                                           const std::string &relation_id,
                                           size_t k) {
  if (k == 0) throw ValidationError("top-k must be at least 1");
  std::map<std::string, size_t> counts;
  for (const TemporalFact &f : store.facts()) {
    if (f.relation_id == relation_id) ++counts[f.subject_id];
  }
  std::vector<std::pair<std::string, size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> subjects;
  for (size_t i = 0; i < ranked.size() && i < k; ++i) subjects.push_back(ranked[i].first);
  return subjects;
}

std::vector<ClozeQuery> ExpandQueries(const FactStore &store,
                                      const std::vector<RelationTemplate> &templates,
                                      const std::set<SubjectRelation> &pairs) {
  std::map<std::string, const RelationTemplate *> by_relation;
  for (const RelationTemplate &t : templates) by_relation[t.relation_id()] = &t;

  const YearRange &period = store.period();
  std::vector<ClozeQuery> queries;
  for (const auto &[subject_id, relation_id] : pairs) {
    auto tmpl = by_relation.find(relation_id);
    if (tmpl == by_relation.end()) {
      throw ValidationError("no template for relation " + relation_id);
    }
    std::span<const size_t> ids = store.FactsFor(subject_id, relation_id);
    if (ids.empty()) continue;
    const std::string &subject_name = store.facts()[ids.front()].subject_name;
    std::string text = tmpl->second->Render(subject_name);
    if (CountOccurrences(text, kMaskLiteral) != 1) {
      throw ValidationError("subject name '" + subject_name +
                            "' contains the mask literal");
    }
    for (int year = period.first; year <= period.last; ++year) {
      // Facts active this year, ordered by resolved start then object name.
      std::vector<const TemporalFact *> active;
      for (size_t i : ids) {
        const TemporalFact &f = store.facts()[i];
        if (f.interval.Contains(year, period)) active.push_back(&f);
      }
      if (active.empty()) continue;
      std::stable_sort(active.begin(), active.end(),
                       [&](const TemporalFact *a, const TemporalFact *b) {
                         int sa = a->interval.Resolve(period).first;
                         int sb = b->interval.Resolve(period).first;
                         if (sa != sb) return sa < sb;
                         return a->object_name < b->object_name;
                       });
      ClozeQuery q;
      q.id = QueryId(subject_id, relation_id, year);
      q.year = year;
      q.text = text;
      q.relation_id = relation_id;
      q.subject_id = subject_id;
      for (const TemporalFact *f : active) {
        if (std::find(q.answers.begin(), q.answers.end(), f->object_name) ==
            q.answers.end()) {
          q.answers.push_back(f->object_name);
        }
      }
      YearRange first = active.front()->interval.Resolve(period);
      q.duration_years = std::min(first.last, period.last) -
                         std::max(first.first, period.first) + 1;
      queries.push_back(std::move(q));
    }
  }
  return queries;
}

DatasetSplit SplitBySubject(const std::vector<ClozeQuery> &queries,
                            const SplitFractions &fractions, uint64_t seed) {
  fractions.Validate();
  std::map<std::string, size_t> mass;
  for (const ClozeQuery &q : queries) ++mass[q.subject_id];
  if (mass.size() < 3) {
    throw ValidationError("subject split needs at least 3 subjects, found " +
                          std::to_string(mass.size()));
  }
  std::vector<std::string> subjects;
  for (const auto &[s, unused] : mass) subjects.push_back(s);
  Rng rng(seed);
  rng.Shuffle(subjects);

  // Walk the shuffled subjects and assign each by where the midpoint of its
  // query mass falls on the cumulative fraction line.
  const double total = static_cast<double>(queries.size());
  const double train_end = fractions.train * total;
  const double val_end = (fractions.train + fractions.validation) * total;
  std::map<std::string, int> part;
  double cumulative = 0;
  for (const std::string &s : subjects) {
    double mid = cumulative + mass[s] / 2.0;
    part[s] = mid < train_end ? 0 : (mid < val_end ? 1 : 2);
    cumulative += mass[s];
  }

  DatasetSplit split;
  split.fractions = fractions;
  for (const ClozeQuery &q : queries) {
    switch (part[q.subject_id]) {
      case 0: split.train.push_back(q); break;
      case 1: split.validation.push_back(q); break;
      default: split.test.push_back(q); break;
    }
  }
  return split;
}

TemplamaBuild BuildTemplama(const FactStore &store,
                            const std::vector<RelationTemplate> &templates,
                            const TemplamaOptions &options) {
  TemplamaBuild build;
  std::set<SubjectRelation> eligible = SelectProbePairs(store);

  // Rank subjects only among eligible pairs.
  std::vector<TemporalFact> eligible_facts;
  for (const TemporalFact &f : store.facts()) {
    if (eligible.count({f.subject_id, f.relation_id})) eligible_facts.push_back(f);
  }
  FactStore eligible_store(std::move(eligible_facts), store.period());
  std::set<std::string> relations;
  for (const auto &[s, r] : eligible) relations.insert(r);
  for (const std::string &relation : relations) {
    for (const std::string &subject :
         SelectTopSubjects(eligible_store, relation, options.top_k)) {
      build.pairs.insert({subject, relation});
    }
  }
  build.queries = ExpandQueries(store, templates, build.pairs);
  build.split = SplitBySubject(build.queries, options.fractions, options.seed);
  return build;
}

std::string QueriesToJsonl(const std::vector<ClozeQuery> &queries) {
  std::string out;
  for (const ClozeQuery &q : queries) {
    nlohmann::ordered_json obj;
    obj["id"] = q.id;
    obj["year"] = q.year;
    obj["query"] = q.text;
    obj["answer"] = q.answers;
    obj["relation"] = q.relation_id;
    obj["subject_id"] = q.subject_id;
    obj["duration"] = q.duration_years;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<ClozeQuery> ParseQueriesJsonl(std::string_view contents,
                                          const std::string &source) {
  using nlohmann::json;
  std::vector<ClozeQuery> queries;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
      ClozeQuery q;
      q.text = obj.at("query").get<std::string>();
      q.relation_id = obj.value("relation", "");
      const json &year = obj.contains("year") ? obj.at("year") : obj.at("date");
      q.year = year.is_number() ? year.get<int>()
                                : ParseInt(year.get<std::string>().substr(0, 4), "year");
      for (const json &a : obj.at("answer")) {
        q.answers.push_back(a.is_string() ? a.get<std::string>()
                                          : a.at("name").get<std::string>());
      }
      if (obj.contains("subject_id")) {
        q.subject_id = obj.at("subject_id").get<std::string>();
      } else if (obj.contains("id")) {
        // Released ids look like "Q123_P54_2012".
        q.subject_id = Split(obj.at("id").get<std::string>(), '_').front();
      }
      q.id = obj.contains("id") ? obj.at("id").get<std::string>()
                                : QueryId(q.subject_id, q.relation_id, q.year);
      q.duration_years = obj.value("duration", 1);
      if (q.answers.empty()) throw ValidationError("empty answer list");
      queries.push_back(std::move(q));
    } catch (const json::exception &e) {
      throw ParseError(source, row, 1, e.what());
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 1, e.what());
    }
  }
  return queries;
}

std::vector<ClozeQuery> LoadQueries(const std::string &path) {
  return ParseQueriesJsonl(ReadFile(path), path);
}

}  // namespace tprobe
