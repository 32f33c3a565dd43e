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

// Smoothed answer-count model of P(y | x, t) under the Uniform, Yearly and
// Temporal regimes.
//
// Contexts are keyed by NormalizeKey(input). With V the vocabulary of
// observed answers and k the smoothing constant, a count table gives
//
//   P(a | key) = (c(key, a) + k) / (N(key) + k (|V| + 1))
//
// where every unobserved answer shares the UNK mass. Keys never seen fall
// back to the table's answer prior c(a) over all keys. Temporal mixes a
// per-year table with the global one:
//
//   P = lambda P_year(a | key, t) + (1 - lambda) P_global(a | key)
//
// and a (key, year) cell with no counts is uniform over V and UNK. Yearly
// keeps one standalone table per expert year and scores with the expert
// nearest to t.

#ifndef TPROBE_COUNT_MODEL_H_
#define TPROBE_COUNT_MODEL_H_

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tprobe/corpus.h"
#include "tprobe/model.h"
#include "tprobe/sampling.h"

namespace tprobe {

// Drops a leading "year: YYYY " prefix, lowercases, deletes ASCII
// punctuation and collapses whitespace. The mask literal is kept as is.
std::string NormalizeKey(std::string_view input);

struct CountModelOptions {
  double smoothing_k = 0.1;
  double lambda = 0.8;
  // Each example adds weight w and then w *= exp(recency_decay). Zero gives
  // plain counts; positive values favour recent examples.
  double recency_decay = 0.0;

  void Validate() const;
};

class TemporalCountModel : public Model {
 public:
  TemporalCountModel(ModelRegime regime, CountModelOptions options);

  // Consumes up to `steps` examples. Throws ValidationError if steps is 0 or
  // the stream yields nothing. Returns the number consumed.
  size_t Train(ExampleStream &stream, size_t steps);
  void Observe(const MaskedExample &example);

  // Nearest expert year, ties to the later one. Yearly only; throws
  // RuntimeError without experts.
  int RouteYear(int query_year) const;
  std::vector<int> ExpertYears() const;
  // One expert as a standalone Uniform model.
  TemporalCountModel Expert(int year) const;

  SpanScore Score(const std::string &input, int year,
                  const std::string &target) const override;
  // Throws RuntimeError("model is untrained") on an empty model.
  std::vector<RankedAnswer> Predict(const std::string &input, int year,
                                    size_t top_n) const override;
  std::vector<double> CandidateDistribution(
      const std::string &input, int year,
      const std::vector<std::string> &candidates) const override;

  // Probability under the model's regime.
  double Probability(const std::string &input, int year,
                     const std::string &target) const;

  const ModelRegime &regime() const { return regime_; }
  const CountModelOptions &options() const { return options_; }
  // Changes the forgetting rate for subsequent training.
  void set_recency_decay(double decay);
  size_t steps() const { return steps_; }
  size_t vocab_size() const;
  bool trained() const { return steps_ > 0; }

  // Sorted line-oriented dump; Load(Serialize()) scores identically.
  std::string Serialize() const;
  static TemporalCountModel Deserialize(std::string_view text,
                                        const std::string &source);
  void Save(const std::string &path) const;
  static TemporalCountModel Load(const std::string &path);

 private:
  struct Counter {
    std::unordered_map<std::string, double> counts;
    double total = 0.0;
    void Add(const std::string &answer, double weight);
    double Get(const std::string &answer) const;
  };
  struct Table {
    std::unordered_map<std::string, Counter> by_key;
    Counter prior;  // answer counts over all keys; its keys are the vocab
    void Add(const std::string &key, const std::string &answer, double weight);
    const Counter *Find(const std::string &key) const;
  };

  double Smoothed(const Counter *counter, const std::string &answer,
                  size_t vocab) const;
  // P under a standalone table, falling back to its prior for unseen keys.
  double TableProb(const Table &table, const std::string &key,
                   const std::string &answer) const;
  double KeyProb(const std::string &key, int year, const std::string &answer) const;
  const Table &ScoringTable(int year) const;
  void AddCount(const std::string &table, const std::string &key,
                const std::string &answer, double weight);

  ModelRegime regime_;
  CountModelOptions options_;
  Table global_;
  std::map<int, Table> years_;  // Temporal: per-year cells; Yearly: experts
  double increment_ = 1.0;
  size_t steps_ = 0;
};

}  // namespace tprobe

#endif  // TPROBE_COUNT_MODEL_H_
