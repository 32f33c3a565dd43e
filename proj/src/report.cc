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

#include "tprobe/report.h"

#include <cstdio>
#include <filesystem>

namespace tprobe {

using nlohmann::ordered_json;

std::string Num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

namespace {

// Rounds through Num so JSON and CSV agree digit for digit.
double Rounded(double value) { return std::strtod(Num(value).c_str(), nullptr); }

std::string Row(const std::vector<std::string> &cells) { return Join(cells, ",") + "\n"; }

}  // namespace

std::string F1ByYearCsv(const std::vector<std::pair<std::string, const F1Result *>> &results) {
  std::string out = "model,year,f1,queries\n";
  for (const auto &[name, result] : results) {
    std::map<int, size_t> counts;
    for (const QueryF1 &q : result->per_query) ++counts[q.year];
    for (const auto &[year, f1] : result->per_year) {
      out += Row({name, std::to_string(year), Num(f1), std::to_string(counts[year])});
    }
  }
  return out;
}

std::string GapCurveCsv(const GapCurve &curve) {
  std::string out = "gap,mean,ci_low,ci_high,pairs,queries\n";
  for (const auto &[gap, p] : curve) {
    out += Row({std::to_string(gap), Num(p.mean), Num(p.ci.low), Num(p.ci.high),
                std::to_string(p.pairs), std::to_string(p.queries)});
  }
  return out;
}

std::string DurationCsv(
    const std::vector<std::pair<std::string, std::map<int, BucketStat>>> &buckets, int cap) {
  std::string out = "model,bucket,mean,count,ci_low,ci_high\n";
  for (const auto &[name, stats] : buckets) {
    for (const auto &[bucket, s] : stats) {
      std::string label = std::to_string(bucket) + (bucket == cap ? "+" : "");
      out += Row({name, label, Num(s.mean), std::to_string(s.count), Num(s.ci.low),
                  Num(s.ci.high)});
    }
  }
  return out;
}

std::string FutureLoglikCsv(
    const std::vector<std::pair<std::string, std::map<std::string, std::vector<LoglikPoint>>>>
        &curves) {
  std::string out = "model,group,year,delta,queries\n";
  for (const auto &[name, curve] : curves) {
    for (const auto &[group, points] : curve) {
      for (const LoglikPoint &p : points) {
        out += Row({name, group, std::to_string(p.year), Num(p.delta), std::to_string(p.count)});
      }
    }
  }
  return out;
}

std::string EntropyCsv(const std::vector<std::pair<std::string, EntropyCurve>> &curves) {
  std::string out = "model,category,year,entropy\n";
  for (const auto &[name, curve] : curves) {
    for (const auto &[category, points] : curve) {
      for (const auto &[year, h] : points) {
        out += Row({name, category, std::to_string(year), Num(h)});
      }
    }
  }
  return out;
}

std::string DateAccuracyCsv(const std::vector<std::pair<std::string, DateReport>> &reports) {
  std::string out = "suite,stratum,key,correct,total,accuracy\n";
  auto row = [&](const std::string &suite, const std::string &stratum, const std::string &key,
                 const Accuracy &a) {
    out += Row({suite, stratum, key, std::to_string(a.correct), std::to_string(a.total),
                Num(a.value())});
  };
  for (const auto &[suite, r] : reports) {
    row(suite, "overall", "all", r.overall);
    for (const auto &[f, a] : r.per_format) row(suite, "format", f, a);
    for (const auto &[s, a] : r.per_specificity) row(suite, "specificity", std::to_string(s), a);
    if (r.ambiguous.total > 0) row(suite, "ambiguous", "all", r.ambiguous);
  }
  return out;
}

ordered_json F1Json(const F1Result &result) {
  ordered_json j;
  j["macro"] = Rounded(result.macro);
  j["seen_macro"] = result.seen_macro ? ordered_json(Rounded(*result.seen_macro)) : ordered_json();
  j["future_macro"] =
      result.future_macro ? ordered_json(Rounded(*result.future_macro)) : ordered_json();
  ordered_json years = ordered_json::object();
  for (const auto &[year, f1] : result.per_year) years[std::to_string(year)] = Rounded(f1);
  j["per_year"] = years;
  j["queries"] = result.per_query.size();
  j["failures"] = result.failures;
  return j;
}

ordered_json GapJson(const GapCurve &curve) {
  ordered_json j = ordered_json::array();
  for (const auto &[gap, p] : curve) {
    j.push_back({{"gap", gap}, {"mean", Rounded(p.mean)}, {"ci_low", Rounded(p.ci.low)},
                 {"ci_high", Rounded(p.ci.high)}, {"pairs", p.pairs}, {"queries", p.queries}});
  }
  return j;
}

ordered_json BucketsJson(const std::map<int, BucketStat> &buckets) {
  ordered_json j = ordered_json::array();
  for (const auto &[bucket, s] : buckets) {
    j.push_back({{"bucket", bucket}, {"mean", Rounded(s.mean)}, {"count", s.count},
                 {"ci_low", Rounded(s.ci.low)}, {"ci_high", Rounded(s.ci.high)}});
  }
  return j;
}

ordered_json LoglikJson(const std::map<std::string, std::vector<LoglikPoint>> &curve) {
  ordered_json j = ordered_json::object();
  for (const auto &[group, points] : curve) {
    ordered_json arr = ordered_json::array();
    for (const LoglikPoint &p : points) {
      arr.push_back({{"year", p.year}, {"delta", Rounded(p.delta)}, {"queries", p.count}});
    }
    j[group] = arr;
  }
  return j;
}

ordered_json EntropyJson(const EntropyCurve &curve) {
  ordered_json j = ordered_json::object();
  for (const auto &[category, points] : curve) {
    ordered_json arr = ordered_json::array();
    for (const auto &[year, h] : points) arr.push_back({{"year", year}, {"entropy", Rounded(h)}});
    j[category] = arr;
  }
  return j;
}

ordered_json DateReportJson(const DateReport &report) {
  auto acc = [](const Accuracy &a) {
    return ordered_json{{"correct", a.correct}, {"total", a.total}, {"accuracy", Rounded(a.value())}};
  };
  ordered_json j;
  j["overall"] = acc(report.overall);
  ordered_json formats = ordered_json::object();
  for (const auto &[f, a] : report.per_format) formats[f] = acc(a);
  j["per_format"] = formats;
  ordered_json levels = ordered_json::object();
  for (const auto &[s, a] : report.per_specificity) levels[std::to_string(s)] = acc(a);
  j["per_specificity"] = levels;
  j["ambiguous"] = acc(report.ambiguous);
  j["excluded_ambiguous"] = report.excluded_ambiguous;
  return j;
}

void WriteReportFile(const std::string &dir, const std::string &name,
                     const std::string &contents) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RuntimeError("cannot create " + dir + ": " + ec.message());
  WriteFile((std::filesystem::path(dir) / name).string(), contents);
}

}  // namespace tprobe
