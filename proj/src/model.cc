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

#include "tprobe/model.h"

#include <cctype>

#include "tprobe/common.h"
#include "tprobe/count_model.h"
#include "tprobe/external_model.h"

namespace tprobe {

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kUniform: return "uniform";
    case Regime::kYearly: return "yearly";
    case Regime::kTemporal: return "temporal";
  }
  return "?";
}

Regime ParseRegime(std::string_view name) {
  std::string lower = AsciiLower(name);
  if (lower == "uniform") return Regime::kUniform;
  if (lower == "yearly") return Regime::kYearly;
  if (lower == "temporal") return Regime::kTemporal;
  throw ValidationError("unknown regime '" + std::string(name) +
                        "' (uniform, yearly or temporal)");
}

int TargetLength(std::string_view target) {
  int n = 0;
  bool in_token = false;
  for (char c : target) {
    bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n < 1 ? 1 : n;
}

std::unique_ptr<Model> LoadModel(const std::string &spec) {
  if (StartsWith(spec, "count:")) {
    return std::make_unique<TemporalCountModel>(TemporalCountModel::Load(spec.substr(6)));
  }
  if (StartsWith(spec, "cmd:")) return std::make_unique<ExternalModel>(spec.substr(4));
  // A bare path is a count model file.
  return std::make_unique<TemporalCountModel>(TemporalCountModel::Load(spec));
}

}  // namespace tprobe
