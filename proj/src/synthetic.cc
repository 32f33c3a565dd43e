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

#include "tprobe/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "tprobe/date_formats.h"
#include "tprobe/tagger.h"

namespace tprobe {

namespace {

// Pronounceable made-up words, unique across the whole world so that no two
// names share a token.
class WordMaker {
 public:
  explicit WordMaker(uint64_t seed) : rng_(seed) {}

  std::string Next() {
    static const char *kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p",
                                    "r", "s", "t", "v", "z", "br", "dr", "kr", "st"};
    static const char *kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    static const char *kCodas[] = {"", "", "n", "r", "l", "s", "m"};
    while (true) {
      std::string w;
      int syllables = 2 + static_cast<int>(rng_.UniformIndex(2));
      for (int i = 0; i < syllables; ++i) {
        w += kOnsets[rng_.UniformIndex(std::size(kOnsets))];
        w += kVowels[rng_.UniformIndex(std::size(kVowels))];
      }
      w += kCodas[rng_.UniformIndex(std::size(kCodas))];
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      if (used_.insert(w).second) return w;
    }
  }

  std::string Name(int words) {
    std::string out = Next();
    for (int i = 1; i < words; ++i) out += " " + Next();
    return out;
  }

  Rng &rng() { return rng_; }

 private:
  Rng rng_;
  std::set<std::string> used_;
};

}  // namespace

void DriftWorldOptions::Validate() const {
  if (changing_subjects + control_subjects < 3) {
    throw ValidationError("drift world needs at least 3 subjects");
  }
  if (min_period < 1 || max_period < min_period) {
    throw ValidationError("drift world periods must satisfy 1 <= min_period <= max_period");
  }
  if (period.first > period.last) throw ValidationError("drift world period is empty");
  if (objects_per_relation < 2) {
    throw ValidationError("drift world needs at least 2 objects per relation");
  }
  if (docs_per_year < 1) throw ValidationError("drift world needs docs_per_year >= 1");
}

ProbeCategory CategoryForPeriod(int change_period) {
  if (change_period <= 0) return ProbeCategory::kNever;
  return change_period <= 2 ? ProbeCategory::kFrequent : ProbeCategory::kRare;
}

std::map<std::string, ProbeCategory> DriftWorld::Categories() const {
  std::map<std::string, ProbeCategory> out;
  for (const WorldSubject &s : subjects) out[s.id] = s.category;
  return out;
}

DriftWorld BuildDriftWorld(const DriftWorldOptions &options) {
  options.Validate();
  DriftWorld world;
  world.options = options;
  world.templates = LoadTemplates(DataPath("templates.tsv"));
  if (world.templates.empty()) throw ValidationError("no relation templates");
  WordMaker words(options.seed);
  Rng &rng = words.rng();

  std::map<std::string, std::vector<std::string>> pools;
  for (const RelationTemplate &t : world.templates) {
    auto &pool = pools[t.relation_id()];
    for (size_t i = 0; i < options.objects_per_relation; ++i) {
      pool.push_back(words.Name(1 + static_cast<int>(rng.UniformIndex(2))));
    }
  }

  const YearRange &period = options.period;
  const size_t n = options.changing_subjects + options.control_subjects;
  char id[32];
  for (size_t i = 0; i < n; ++i) {
    WorldSubject s;
    std::snprintf(id, sizeof(id), "S%04zu", i);
    s.id = id;
    s.name = words.Name(2);
    s.relation_id = world.templates[i % world.templates.size()].relation_id();
    const auto &pool = pools[s.relation_id];
    std::string object_prefix = s.relation_id + "/";
    if (i >= options.changing_subjects) {
      // Open-ended facts that started before the period.
      const std::string &object = pool[rng.UniformIndex(pool.size())];
      world.facts.push_back({s.id, s.name, s.relation_id, object_prefix + object, object,
                             {period.first - 1 - static_cast<int>(rng.UniformIndex(5)),
                              std::nullopt}});
    } else {
      s.change_period = options.min_period +
                        static_cast<int>(rng.UniformIndex(options.max_period -
                                                          options.min_period + 1));
      int phase = static_cast<int>(rng.UniformIndex(s.change_period));
      std::string previous;
      for (int start = period.first - phase; start <= period.last; start += s.change_period) {
        std::string object;
        do {
          object = pool[rng.UniformIndex(pool.size())];
        } while (object == previous);
        previous = object;
        world.facts.push_back({s.id, s.name, s.relation_id, object_prefix + object, object,
                               {start, start + s.change_period - 1}});
      }
    }
    s.category = CategoryForPeriod(s.change_period);
    world.subjects.push_back(std::move(s));
  }

  std::set<std::string> objects, entities;
  for (const auto &[rel, pool] : pools) objects.insert(pool.begin(), pool.end());
  entities = objects;
  for (const WorldSubject &s : world.subjects) entities.insert(s.name);
  world.object_names.assign(objects.begin(), objects.end());
  world.entity_names.assign(entities.begin(), entities.end());

  FactStore store = world.Store();
  std::set<SubjectRelation> pairs;
  for (const WorldSubject &s : world.subjects) pairs.insert({s.id, s.relation_id});
  world.queries = ExpandQueries(store, world.templates, pairs);

  std::map<std::string, const RelationTemplate *> by_relation;
  for (const RelationTemplate &t : world.templates) by_relation[t.relation_id()] = &t;
  std::vector<size_t> order(world.subjects.size());
  for (int year : period.Years()) {
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.Shuffle(order);
    std::vector<std::string> texts(options.docs_per_year);
    std::vector<Date> dates;
    for (int d = 0; d < options.docs_per_year; ++d) {
      int month = 1 + static_cast<int>(rng.UniformIndex(12));
      int day = 1 + static_cast<int>(rng.UniformIndex(DaysInMonth(year, month)));
      dates.push_back({year, month, day});
      texts[d] = "The bulletin went out on " + std::string(kMonthNames[month - 1]) + " " +
                 std::to_string(day) + ", " + std::to_string(year) + ".";
    }
    for (size_t k = 0; k < order.size(); ++k) {
      const WorldSubject &s = world.subjects[order[k]];
      std::set<ObjectRef> active = ActiveObjects(store, s.id, s.relation_id, year);
      for (const ObjectRef &o : active) {
        texts[k % texts.size()] += " " + by_relation[s.relation_id]->RenderFact(s.name, o.name);
      }
    }
    for (int d = 0; d < options.docs_per_year; ++d) {
      std::snprintf(id, sizeof(id), "y%d-%03d", year, d);
      world.docs.push_back({id, dates[d].ToIso(), year, texts[d]});
    }
  }
  return world;
}

std::vector<MaskedExample> DriftWorldCorpus(const DriftWorld &world, MaskPolicy policy,
                                            uint64_t seed, CorpusStats *stats) {
  GazetteerTagger tagger(world.entity_names, true);
  CorpusOptions options;
  options.policy = policy;
  options.seed = seed;
  return BuildCorpus(world.docs, tagger, options, stats);
}

std::vector<ClozeQuery> QueriesInYears(const std::vector<ClozeQuery> &queries,
                                       const YearRange &years) {
  std::vector<ClozeQuery> out;
  for (const ClozeQuery &q : queries) {
    if (years.Contains(q.year)) out.push_back(q);
  }
  return out;
}

}  // namespace tprobe
