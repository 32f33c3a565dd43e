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

// CSV and JSON renderings of evaluation results. Numbers are printed with
// %.10g so reports are byte-stable across runs.

#ifndef TPROBE_REPORT_H_
#define TPROBE_REPORT_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tprobe/diagnostics.h"
#include "tprobe/evaluator.h"

namespace tprobe {

std::string Num(double value);

// model,year,f1,queries
std::string F1ByYearCsv(const std::vector<std::pair<std::string, const F1Result *>> &results);
// gap,mean,ci_low,ci_high,pairs,queries
std::string GapCurveCsv(const GapCurve &curve);
// model,bucket,mean,count,ci_low,ci_high; the cap bucket is written "N+".
std::string DurationCsv(
    const std::vector<std::pair<std::string, std::map<int, BucketStat>>> &buckets, int cap);
// model,group,year,delta,queries
std::string FutureLoglikCsv(
    const std::vector<std::pair<std::string, std::map<std::string, std::vector<LoglikPoint>>>>
        &curves);
// model,category,year,entropy
std::string EntropyCsv(const std::vector<std::pair<std::string, EntropyCurve>> &curves);
// stratum,key,correct,total,accuracy
std::string DateAccuracyCsv(const std::vector<std::pair<std::string, DateReport>> &reports);

nlohmann::ordered_json F1Json(const F1Result &result);
nlohmann::ordered_json GapJson(const GapCurve &curve);
nlohmann::ordered_json BucketsJson(const std::map<int, BucketStat> &buckets);
nlohmann::ordered_json LoglikJson(const std::map<std::string, std::vector<LoglikPoint>> &curve);
nlohmann::ordered_json EntropyJson(const EntropyCurve &curve);
nlohmann::ordered_json DateReportJson(const DateReport &report);

// Creates `dir` and writes `name` inside it.
void WriteReportFile(const std::string &dir, const std::string &name, const std::string &contents);

}  // namespace tprobe

#endif  // TPROBE_REPORT_H_
