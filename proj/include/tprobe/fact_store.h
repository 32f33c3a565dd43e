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

// Temporally scoped facts: (subject, relation, object) triples that hold over
// an interval of years, loaded from TSV or JSONL and indexed by
// (subject, relation).

#ifndef TPROBE_FACT_STORE_H_
#define TPROBE_FACT_STORE_H_

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tprobe/common.h"

namespace tprobe {

// Validity interval with optional endpoints. Both endpoints are inclusive.
struct YearInterval {
  std::optional<int> start;
  std::optional<int> end;

  // Fills missing endpoints from the period. The result may be empty
  // (first > last) when an explicit endpoint lies outside the period.
  YearRange Resolve(const YearRange &period) const;
  bool Contains(int year, const YearRange &period) const {
    return Resolve(period).Contains(year);
  }

  friend bool operator==(const YearInterval &, const YearInterval &) = default;
};

struct TemporalFact {
  std::string subject_id;
  std::string subject_name;
  std::string relation_id;
  std::string object_id;
  std::string object_name;
  YearInterval interval;

  friend bool operator==(const TemporalFact &, const TemporalFact &) = default;
};

struct ObjectRef {
  std::string id;
  std::string name;

  friend auto operator<=>(const ObjectRef &, const ObjectRef &) = default;
};

using SubjectRelation = std::pair<std::string, std::string>;

// Immutable, validated and indexed collection of facts over a fixed period.
// Safe for concurrent readers.
class FactStore {
 public:
  // Validates every fact and drops exact duplicates with a warning.
  // Throws ValidationError naming the offending fact.
  FactStore(std::vector<TemporalFact> facts, YearRange period);

  const std::vector<TemporalFact> &facts() const { return facts_; }
  const YearRange &period() const { return period_; }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

  // Indices into facts() for one (subject, relation); empty if unknown.
  std::span<const size_t> FactsFor(const std::string &subject_id,
                                   const std::string &relation_id) const;
  // All indexed (subject, relation) pairs in sorted order.
  std::vector<SubjectRelation> Pairs() const;

  // Messages produced while loading (duplicates and the like).
  const std::vector<std::string> &warnings() const { return warnings_; }

 private:
  friend FactStore ParseFacts(std::string_view, YearRange, const std::string &,
                              bool);

  std::vector<TemporalFact> facts_;
  YearRange period_;
  std::map<SubjectRelation, std::vector<size_t>> index_;
  std::vector<std::string> warnings_;
};

// Parses a fact file. TSV needs the header
//   subject_id subject_name relation_id object_id object_name start_year end_year
// and JSONL uses the same keys. Empty or null years are missing endpoints;
// "2009-05-01" style dates are truncated to the year.
FactStore ParseFacts(std::string_view contents, YearRange period,
                     const std::string &source, bool jsonl);
// Chooses JSONL for *.jsonl files or content starting with '{'.
FactStore LoadFacts(const std::string &path, YearRange period);

// Canonical TSV form: header plus one row per fact in load order.
std::string SerializeFacts(const FactStore &store);

struct FilterCounts {
  size_t kept = 0;
  size_t dropped = 0;
};

// Keeps facts with an explicit start or end year >= cutoff.
FactStore FilterTemporal(const FactStore &store, int cutoff,
                         FilterCounts *counts = nullptr);

// Objects whose resolved interval contains the year.
std::set<ObjectRef> ActiveObjects(const FactStore &store,
                                  const std::string &subject_id,
                                  const std::string &relation_id, int year);

}  // namespace tprobe

#endif  // TPROBE_FACT_STORE_H_
