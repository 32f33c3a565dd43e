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

#include "tprobe/fact_store.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace tprobe {

namespace {

const char *const kColumns[] = {"subject_id", "subject_name", "relation_id",
                                "object_id",  "object_name",  "start_year",
                                "end_year"};
constexpr int kNumColumns = 7;

std::string Describe(const TemporalFact &f) {
  return f.subject_id + "/" + f.relation_id + "/" + f.object_id;
}

std::string FactKey(const TemporalFact &f) {
  std::string key = f.subject_id + '\x1f' + f.subject_name + '\x1f' +
                    f.relation_id + '\x1f' + f.object_id + '\x1f' +
                    f.object_name + '\x1f';
  key += f.interval.start ? std::to_string(*f.interval.start) : "-";
  key += '\x1f';
  key += f.interval.end ? std::to_string(*f.interval.end) : "-";
  return key;
}

// Returns an error message, or empty if the fact is valid.
std::string CheckFact(const TemporalFact &f) {
  if (f.subject_id.empty()) return "empty subject_id";
  if (f.relation_id.empty()) return "empty relation_id";
  if (f.object_id.empty()) return "empty object_id";
  if (f.subject_name.empty()) return "empty subject_name";
  if (f.object_name.empty()) return "empty object_name";
  if (f.interval.start && f.interval.end && *f.interval.start > *f.interval.end) {
    return "interval violation: start " + std::to_string(*f.interval.start) +
           " is after end " + std::to_string(*f.interval.end);
  }
  return "";
}

// Accepts "", "2009", "+2009", "2009-05", "2009-05-01", "2009-05-01T00:00:00Z".
// Returns false on anything else.
bool ParseYearField(std::string_view text, std::optional<int> *year) {
  text = Trim(text);
  if (text.empty()) {
    year->reset();
    return true;
  }
  if (text.front() == '+') text.remove_prefix(1);
  if (text.size() < 4) return false;
  for (int i = 0; i < 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  if (text.size() > 4 && text[4] != '-' && text[4] != 'T') return false;
  *year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 +
          (text[3] - '0');
  return true;
}

std::vector<TemporalFact> ParseTsv(std::string_view contents,
                                   const std::string &source,
                                   std::vector<int> *rows) {
  std::vector<TemporalFact> facts;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = Split(line, '\t');
    if (!header_seen) {
      header_seen = true;
      if (static_cast<int>(fields.size()) != kNumColumns) {
        throw ParseError(source, row, 1,
                         "header must have 7 tab-separated columns");
      }
      for (int c = 0; c < kNumColumns; ++c) {
        if (Trim(fields[c]) != kColumns[c]) {
          throw ParseError(source, row, c + 1,
                           std::string("expected header column '") +
                               kColumns[c] + "'");
        }
      }
      continue;
    }
    if (static_cast<int>(fields.size()) != kNumColumns) {
      throw ParseError(source, row,
                       std::min<int>(static_cast<int>(fields.size()), kNumColumns) + 1,
                       "expected 7 fields, found " + std::to_string(fields.size()));
    }
    TemporalFact f;
    f.subject_id = Trim(fields[0]);
    f.subject_name = Trim(fields[1]);
    f.relation_id = Trim(fields[2]);
    f.object_id = Trim(fields[3]);
    f.object_name = Trim(fields[4]);
    if (!ParseYearField(fields[5], &f.interval.start)) {
      throw ParseError(source, row, 6, "bad start_year '" + fields[5] + "'");
    }
    if (!ParseYearField(fields[6], &f.interval.end)) {
      throw ParseError(source, row, 7, "bad end_year '" + fields[6] + "'");
    }
    facts.push_back(std::move(f));
    rows->push_back(row);
  }
  if (!header_seen) throw ParseError(source, 1, 1, "missing header");
  return facts;
}

std::vector<TemporalFact> ParseJsonl(std::string_view contents,
                                     const std::string &source,
                                     std::vector<int> *rows) {
  using nlohmann::json;
  std::vector<TemporalFact> facts;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(source, row, static_cast<int>(e.byte), "invalid JSON");
    }
    if (!obj.is_object()) throw ParseError(source, row, 1, "expected an object");
    TemporalFact f;
    std::string *strings[] = {&f.subject_id, &f.subject_name, &f.relation_id,
                              &f.object_id, &f.object_name};
    for (int c = 0; c < 5; ++c) {
      auto it = obj.find(kColumns[c]);
      if (it == obj.end() || !it->is_string()) {
        throw ParseError(source, row, c + 1,
                         std::string("missing string field '") + kColumns[c] + "'");
      }
      *strings[c] = Trim(it->get<std::string>());
    }
    std::optional<int> *years[] = {&f.interval.start, &f.interval.end};
    for (int c = 5; c < 7; ++c) {
      auto it = obj.find(kColumns[c]);
      if (it == obj.end() || it->is_null()) continue;
      std::string text = it->is_number_integer() ? std::to_string(it->get<int>())
                         : it->is_string()       ? it->get<std::string>()
                                                 : std::string("?");
      if (!ParseYearField(text, years[c - 5])) {
        throw ParseError(source, row, c + 1,
                         std::string("bad ") + kColumns[c] + " '" + text + "'");
      }
    }
    facts.push_back(std::move(f));
    rows->push_back(row);
  }
  return facts;
}

}  // namespace

YearRange YearInterval::Resolve(const YearRange &period) const {
  return {start.value_or(period.first), end.value_or(period.last)};
}

FactStore::FactStore(std::vector<TemporalFact> facts, YearRange period)
    : period_(period) {
  if (period.first > period.last) {
    throw ValidationError("fact store period " + period.ToString() +
                          " is empty");
  }
  std::map<std::string, size_t> seen;
  for (size_t i = 0; i < facts.size(); ++i) {
    std::string problem = CheckFact(facts[i]);
    if (!problem.empty()) {
      throw ValidationError("fact " + std::to_string(i + 1) + " (" +
                            Describe(facts[i]) + "): " + problem);
    }
    auto [it, inserted] = seen.emplace(FactKey(facts[i]), i);
    if (!inserted) {
      warnings_.push_back("fact " + std::to_string(i + 1) +
                          " duplicates fact " + std::to_string(it->second + 1) +
                          "; dropped");
      continue;
    }
    index_[{facts[i].subject_id, facts[i].relation_id}].push_back(facts_.size());
    facts_.push_back(std::move(facts[i]));
  }
}

std::span<const size_t> FactStore::FactsFor(const std::string &subject_id,
                                            const std::string &relation_id) const {
  auto it = index_.find({subject_id, relation_id});
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<SubjectRelation> FactStore::Pairs() const {
  std::vector<SubjectRelation> pairs;
  pairs.reserve(index_.size());
  for (const auto &[key, unused] : index_) pairs.push_back(key);
  return pairs;
}

FactStore ParseFacts(std::string_view contents, YearRange period,
                     const std::string &source, bool jsonl) {
  std::vector<int> rows;
  std::vector<TemporalFact> parsed = jsonl ? ParseJsonl(contents, source, &rows)
                                           : ParseTsv(contents, source, &rows);
  // Row-level checks first so errors carry file rows rather than fact indices.
  std::vector<TemporalFact> unique;
  std::vector<std::string> warnings;
  std::map<std::string, int> seen;
  for (size_t i = 0; i < parsed.size(); ++i) {
    std::string problem = CheckFact(parsed[i]);
    if (!problem.empty()) {
      int column = problem.rfind("interval", 0) == 0 ? 6 : 1;
      throw ParseError(source, rows[i], column, problem);
    }
    auto [it, inserted] = seen.emplace(FactKey(parsed[i]), rows[i]);
    if (!inserted) {
      warnings.push_back(source + ":" + std::to_string(rows[i]) +
                         ": duplicate of row " + std::to_string(it->second) +
                         "; dropped");
      Warn(warnings.back());
      continue;
    }
    unique.push_back(std::move(parsed[i]));
  }
  FactStore store(std::move(unique), period);
  store.warnings_ = std::move(warnings);
  return store;
}

FactStore LoadFacts(const std::string &path, YearRange period) {
  std::string contents = ReadFile(path);
  std::string_view head = Trim(contents);
  bool jsonl = (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") ||
               (!head.empty() && head.front() == '{');
  return ParseFacts(contents, period, path, jsonl);
}

std::string SerializeFacts(const FactStore &store) {
  std::string out;
  for (int c = 0; c < kNumColumns; ++c) {
    if (c > 0) out += '\t';
    out += kColumns[c];
  }
  out += '\n';
  for (const TemporalFact &f : store.facts()) {
    out += f.subject_id + '\t' + f.subject_name + '\t' + f.relation_id + '\t' +
           f.object_id + '\t' + f.object_name + '\t';
    if (f.interval.start) out += std::to_string(*f.interval.start);
    out += '\t';
    if (f.interval.end) out += std::to_string(*f.interval.end);
    out += '\n';
  }
  return out;
}

FactStore FilterTemporal(const FactStore &store, int cutoff,
                         FilterCounts *counts) {
  std::vector<TemporalFact> kept;
  for (const TemporalFact &f : store.facts()) {
    bool recent = (f.interval.start && *f.interval.start >= cutoff) ||
                  (f.interval.end && *f.interval.end >= cutoff);
    if (recent) kept.push_back(f);
  }
  if (counts != nullptr) {
    counts->kept = kept.size();
    counts->dropped = store.size() - kept.size();
  }
  return FactStore(std::move(kept), store.period());
}

std::set<ObjectRef> ActiveObjects(const FactStore &store,
                                  const std::string &subject_id,
                                  const std::string &relation_id, int year) {
  std::set<ObjectRef> objects;
  for (size_t i : store.FactsFor(subject_id, relation_id)) {
    const TemporalFact &f = store.facts()[i];
    if (f.interval.Contains(year, store.period())) {
      objects.insert({f.object_id, f.object_name});
    }
  }
  return objects;
}

}  // namespace tprobe
