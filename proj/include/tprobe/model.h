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

// The scoring interface shared by the built-in count model and external
// models reached over the line protocol.

#ifndef TPROBE_MODEL_H_
#define TPROBE_MODEL_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tprobe {

enum class Regime { kUniform, kYearly, kTemporal };

std::string_view RegimeName(Regime regime);
Regime ParseRegime(std::string_view name);

struct ModelRegime {
  Regime variant = Regime::kTemporal;
  // Yearly only. Empty means one expert per year seen in training.
  std::vector<int> expert_years;
};

struct SpanScore {
  double log_prob = 0.0;  // natural log, <= 0
  int target_len = 1;     // whitespace tokens in the target, >= 1
};

struct RankedAnswer {
  std::string answer;
  double log_prob = 0.0;

  friend bool operator==(const RankedAnswer &, const RankedAnswer &) = default;
};

// Whitespace token count, at least 1.
int TargetLength(std::string_view target);

class Model {
 public:
  virtual ~Model() = default;

  // log P(target | input, year). `input` holds the mask literal.
  virtual SpanScore Score(const std::string &input, int year,
                          const std::string &target) const = 0;
  // Best answers first; ties broken by answer string.
  virtual std::vector<RankedAnswer> Predict(const std::string &input, int year,
                                            size_t top_n) const = 0;
  // Scores renormalized over the candidates; sums to 1.
  virtual std::vector<double> CandidateDistribution(
      const std::string &input, int year,
      const std::vector<std::string> &candidates) const = 0;
};

// "count:PATH" loads a serialized count model; "cmd:COMMAND" starts an
// external model process.
std::unique_ptr<Model> LoadModel(const std::string &spec);

}  // namespace tprobe

#endif  // TPROBE_MODEL_H_
