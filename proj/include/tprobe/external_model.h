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

// Line protocol for models living in another process. Requests are JSON
// objects, one per line:
//
//   {"op": "score",   "input": ..., "year": ..., "target": ...}
//     -> {"log_prob": ..., "target_len": ...}
//   {"op": "predict", "input": ..., "year": ..., "top_n": ...}
//     -> {"answers": [{"answer": ..., "log_prob": ...}, ...]}
//   {"op": "dist",    "input": ..., "year": ..., "candidates": [...]}
//     -> {"probs": [...]}
//
// Failures come back as {"error": "..."}.

#ifndef TPROBE_EXTERNAL_MODEL_H_
#define TPROBE_EXTERNAL_MODEL_H_

#include <iosfwd>
#include <memory>

#include "tprobe/model.h"
#include "tprobe/subprocess.h"

namespace tprobe {

class ExternalModel : public Model {
 public:
  explicit ExternalModel(const std::string &command);

  SpanScore Score(const std::string &input, int year,
                  const std::string &target) const override;
  std::vector<RankedAnswer> Predict(const std::string &input, int year,
                                    size_t top_n) const override;
  std::vector<double> CandidateDistribution(
      const std::string &input, int year,
      const std::vector<std::string> &candidates) const override;

 private:
  // The process is an implementation detail of otherwise const queries.
  mutable Subprocess process_;
};

// Answers protocol requests from `in` until EOF. Returns requests served.
size_t ServeModel(const Model &model, std::istream &in, std::ostream &out);

}  // namespace tprobe

#endif  // TPROBE_EXTERNAL_MODEL_H_
