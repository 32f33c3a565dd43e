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

#include "tprobe/config.h"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>

#include "tprobe/date_formats.h"

namespace tprobe {

namespace {

struct Field {
  const char *name;
  std::function<std::string(const RunConfig &)> get;
  std::function<void(RunConfig &, const std::string &)> set;
};

size_t ParseCount(const std::string &v, const char *name) {
  int n = ParseInt(v, name);
  if (n < 0) throw ValidationError(std::string(name) + " must be >= 0");
  return static_cast<size_t>(n);
}

#define TPROBE_RANGE(f) \
  {#f, [](const RunConfig &c) { return c.f.ToString(); }, \
   [](RunConfig &c, const std::string &v) { c.f = YearRange::Parse(v); }}
#define TPROBE_DOUBLE(f) \
  {#f, [](const RunConfig &c) { return FormatShortest(c.f); }, \
   [](RunConfig &c, const std::string &v) { c.f = ParseDouble(v, #f); }}
#define TPROBE_INT(f) \
  {#f, [](const RunConfig &c) { return std::to_string(c.f); }, \
   [](RunConfig &c, const std::string &v) { c.f = ParseInt(v, #f); }}
#define TPROBE_COUNT(f) \
  {#f, [](const RunConfig &c) { return std::to_string(c.f); }, \
   [](RunConfig &c, const std::string &v) { c.f = ParseCount(v, #f); }}
#define TPROBE_STRING(f) \
  {#f, [](const RunConfig &c) { return c.f; }, \
   [](RunConfig &c, const std::string &v) { c.f = v; }}

const std::vector<Field> &Fields() {
  static const std::vector<Field> fields = {
      TPROBE_RANGE(period),
      TPROBE_RANGE(train_years),
      TPROBE_RANGE(future_years),
      {"seed", [](const RunConfig &c) { return std::to_string(c.seed); },
       [](RunConfig &c, const std::string &v) {
         char *end = nullptr;
         unsigned long long s = std::strtoull(v.c_str(), &end, 10);
         if (v.empty() || *end != '\0' || v[0] == '-') {
           throw ValidationError("seed must be a non-negative integer, got '" + v + "'");
         }
         c.seed = s;
       }},
      {"regime", [](const RunConfig &c) { return std::string(RegimeName(c.regime)); },
       [](RunConfig &c, const std::string &v) { c.regime = ParseRegime(v); }},
      TPROBE_DOUBLE(smoothing_k),
      TPROBE_DOUBLE(lambda),
      {"split", [](const RunConfig &c) { return c.split.ToString(); },
       [](RunConfig &c, const std::string &v) { c.split = SplitFractions::Parse(v); }},
      {"mix_ratio",
       [](const RunConfig &c) {
         return std::to_string(c.mix_corpus) + ":" + std::to_string(c.mix_probe);
       },
       [](RunConfig &c, const std::string &v) {
         std::vector<std::string> parts = Split(v, ':');
         if (parts.size() != 2) throw ValidationError("mix_ratio must look like 1000:1");
         c.mix_corpus = ParseInt(parts[0], "mix_ratio corpus part");
         c.mix_probe = ParseInt(parts[1], "mix_ratio probe part");
       }},
      TPROBE_DOUBLE(alpha),
      {"alpha_grid",
       [](const RunConfig &c) {
         std::vector<std::string> parts;
         for (double a : c.alpha_grid) parts.push_back(FormatShortest(a));
         return Join(parts, ",");
       },
       [](RunConfig &c, const std::string &v) {
         c.alpha_grid.clear();
         for (const std::string &p : Split(v, ',')) {
           c.alpha_grid.push_back(ParseDouble(Trim(p), "alpha_grid"));
         }
       }},
      TPROBE_COUNT(steps),
      TPROBE_COUNT(adapt_steps),
      TPROBE_DOUBLE(adapt_forgetting),
      TPROBE_RANGE(adapt_new_slice),
      TPROBE_COUNT(top_k),
      {"input_style",
       [](const RunConfig &c) { return std::string(InputStyleName(c.input_style)); },
       [](RunConfig &c, const std::string &v) { c.input_style = ParseInputStyle(v); }},
      TPROBE_COUNT(bootstrap_resamples),
      TPROBE_INT(duration_cap),
      TPROBE_INT(horizon),
      TPROBE_RANGE(calib_years),
      TPROBE_COUNT(world_subjects),
      TPROBE_COUNT(world_controls),
      TPROBE_INT(world_min_period),
      TPROBE_INT(world_max_period),
      TPROBE_COUNT(world_objects),
      TPROBE_INT(world_docs_per_year),
      TPROBE_STRING(facts),
      TPROBE_STRING(docs),
      TPROBE_STRING(templates),
      TPROBE_STRING(tagger),
      TPROBE_STRING(future_probes),
      TPROBE_COUNT(date_pairs),
      TPROBE_COUNT(date_train_pairs),
      TPROBE_RANGE(date_years),
      {"date_coarse_formats",
       [](const RunConfig &c) { return Join(c.date_coarse_formats, ","); },
       [](RunConfig &c, const std::string &v) {
         c.date_coarse_formats.clear();
         for (const std::string &p : Split(v, ',')) {
           c.date_coarse_formats.emplace_back(Trim(p));
         }
       }},
  };
  return fields;
}

#undef TPROBE_RANGE
#undef TPROBE_DOUBLE
#undef TPROBE_INT
#undef TPROBE_COUNT
#undef TPROBE_STRING

[[noreturn]] void Bad(const std::string &field, const std::string &what) {
  throw ValidationError("config: " + field + ": " + what);
}

void CheckWithin(const YearRange &inner, const YearRange &outer, const std::string &field) {
  if (inner.first < outer.first || inner.last > outer.last) {
    Bad(field, inner.ToString() + " lies outside period " + outer.ToString());
  }
}

}  // namespace

std::string FormatShortest(double value) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void RunConfig::Set(const std::string &key, const std::string &value) {
  for (const Field &f : Fields()) {
    if (key != f.name) continue;
    try {
      f.set(*this, value);
    } catch (const ValidationError &e) {
      Bad(key, e.what());
    }
    return;
  }
  throw ValidationError("config: unknown key '" + key + "'");
}

void RunConfig::Validate() const {
  for (const auto &[name, range] :
       {std::pair<const char *, const YearRange *>{"period", &period},
        {"train_years", &train_years},
        {"future_years", &future_years},
        {"adapt_new_slice", &adapt_new_slice},
        {"calib_years", &calib_years},
        {"date_years", &date_years}}) {
    if (range->first > range->last) Bad(name, "start after end");
  }
  CheckWithin(train_years, period, "train_years");
  CheckWithin(future_years, period, "future_years");
  CheckWithin(adapt_new_slice, period, "adapt_new_slice");
  if (train_years.last >= future_years.first && future_years.last >= train_years.first) {
    Bad("future_years", "overlaps train_years");
  }
  if (adapt_new_slice.last >= train_years.first && train_years.last >= adapt_new_slice.first) {
    Bad("adapt_new_slice", "overlaps train_years");
  }
  if (!(smoothing_k > 0.0)) Bad("smoothing_k", "must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) Bad("lambda", "must be in [0, 1]");
  try {
    split.Validate();
  } catch (const ValidationError &e) {
    Bad("split", e.what());
  }
  if (mix_corpus < 1) Bad("mix_ratio", "corpus part must be >= 1");
  if (mix_probe < 1) Bad("mix_ratio", "probe part must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) Bad("alpha", "must be in [0, 1]");
  if (alpha_grid.empty()) Bad("alpha_grid", "must not be empty");
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] <= 1.0)) {
      Bad("alpha_grid[" + std::to_string(i) + "]", "must be in [0, 1]");
    }
  }
  if (steps < 1) Bad("steps", "must be >= 1");
  if (ContinuationSteps() < 1) Bad("adapt_steps", "continuation budget is 0");
  if (!(adapt_forgetting >= 0.0)) Bad("adapt_forgetting", "must be >= 0");
  if (top_k < 1) Bad("top_k", "must be >= 1");
  if (duration_cap < 1) Bad("duration_cap", "must be >= 1");
  if (horizon < 0) Bad("horizon", "must be >= 0");
  if (world_subjects + world_controls < 3) Bad("world_subjects", "need at least 3 subjects");
  if (world_min_period < 1) Bad("world_min_period", "must be >= 1");
  if (world_max_period < world_min_period) Bad("world_max_period", "below world_min_period");
  if (world_objects < 2) Bad("world_objects", "must be >= 2");
  if (world_docs_per_year < 1) Bad("world_docs_per_year", "must be >= 1");
  if (facts.empty() != docs.empty()) Bad(facts.empty() ? "facts" : "docs", "facts and docs go together");
  if (date_pairs < 1) Bad("date_pairs", "must be >= 1");
  if (date_train_pairs < 1) Bad("date_train_pairs", "must be >= 1");
  if (date_coarse_formats.empty()) Bad("date_coarse_formats", "must not be empty");
}

std::string RunConfig::Serialize() const {
  std::string out;
  for (const Field &f : Fields()) out += std::string(f.name) + " = " + f.get(*this) + "\n";
  return out;
}

RunConfig RunConfig::Parse(std::string_view text, const std::string &source) {
  RunConfig config;
  std::set<std::string> seen;
  int row = 0;
  for (const std::string &raw : Split(text, '\n')) {
    ++row;
    std::string_view line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, row, 1, "expected key = value");
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (!seen.insert(key).second) throw ParseError(source, row, 1, "duplicate key " + key);
    try {
      config.Set(key, value);
    } catch (const ValidationError &e) {
      throw ParseError(source, row, static_cast<int>(eq) + 2, e.what());
    }
  }
  return config;
}

RunConfig RunConfig::Load(const std::string &path) { return Parse(ReadFile(path), path); }

}  // namespace tprobe
