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

#include "tprobe/count_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace tprobe {

namespace {

constexpr char kMagic[] = "tprobe-count-model 1";

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Unescape(std::string_view s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    char c = s[++i];
    out += c == 't' ? '\t' : c == 'n' ? '\n' : c;
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string NormalizeKey(std::string_view input) {
  input = StripTimePrefix(input);
  std::string out;
  bool pending_space = false;
  for (size_t i = 0; i < input.size(); ++i) {
    if (input.substr(i, kMaskLiteral.size()) == kMaskLiteral) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += kMaskLiteral;
      i += kMaskLiteral.size() - 1;
      continue;
    }
    unsigned char c = static_cast<unsigned char>(input[i]);
    if (std::isspace(c)) {
      pending_space = true;
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    }
  }
  return out;
}

void CountModelOptions::Validate() const {
  if (!(smoothing_k > 0.0)) {
    throw ValidationError("smoothing_k must be positive, got " + FormatDouble(smoothing_k));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("lambda must be in [0, 1], got " + FormatDouble(lambda));
  }
  if (!(recency_decay >= 0.0)) {
    throw ValidationError("recency_decay must be >= 0, got " + FormatDouble(recency_decay));
  }
}

void TemporalCountModel::Counter::Add(const std::string &answer, double weight) {
  counts[answer] += weight;
  total += weight;
}

double TemporalCountModel::Counter::Get(const std::string &answer) const {
  auto it = counts.find(answer);
  return it == counts.end() ? 0.0 : it->second;
}

void TemporalCountModel::Table::Add(const std::string &key, const std::string &answer,
                                    double weight) {
  by_key[key].Add(answer, weight);
  prior.Add(answer, weight);
}

const TemporalCountModel::Counter *TemporalCountModel::Table::Find(
    const std::string &key) const {
  auto it = by_key.find(key);
  return it == by_key.end() ? nullptr : &it->second;
}

TemporalCountModel::TemporalCountModel(ModelRegime regime, CountModelOptions options)
    : regime_(std::move(regime)), options_(options) {
  options_.Validate();
  if (regime_.variant == Regime::kYearly) {
    std::sort(regime_.expert_years.begin(), regime_.expert_years.end());
    regime_.expert_years.erase(
        std::unique(regime_.expert_years.begin(), regime_.expert_years.end()),
        regime_.expert_years.end());
    for (int y : regime_.expert_years) years_[y];
  } else {
    regime_.expert_years.clear();
  }
}

void TemporalCountModel::set_recency_decay(double decay) {
  CountModelOptions next = options_;
  next.recency_decay = decay;
  next.Validate();
  options_ = next;
}

void TemporalCountModel::Observe(const MaskedExample &example) {
  if (example.target.empty()) throw ValidationError("example has an empty target");
  const std::string key = NormalizeKey(example.input);
  const double w = increment_;
  switch (regime_.variant) {
    case Regime::kUniform:
      global_.Add(key, example.target, w);
      break;
    case Regime::kTemporal:
      global_.Add(key, example.target, w);
      years_[example.year].Add(key, example.target, w);
      break;
    case Regime::kYearly:
      if (regime_.expert_years.empty()) {
        years_[example.year].Add(key, example.target, w);
      } else {
        years_[RouteYear(example.year)].Add(key, example.target, w);
      }
      break;
  }
  ++steps_;
  if (options_.recency_decay > 0.0) {
    increment_ *= std::exp(options_.recency_decay);
    if (!std::isfinite(increment_) || increment_ > 1e250) {
      throw RuntimeError("recency weights overflowed after " + std::to_string(steps_) +
                         " steps; lower recency_decay");
    }
  }
}

size_t TemporalCountModel::Train(ExampleStream &stream, size_t steps) {
  if (steps == 0) throw ValidationError("training needs at least one step");
  size_t consumed = 0;
  while (consumed < steps) {
    std::optional<MaskedExample> ex = stream.Next();
    if (!ex) break;
    Observe(*ex);
    ++consumed;
  }
  if (consumed == 0) throw ValidationError("training stream is empty");
  return consumed;
}

std::vector<int> TemporalCountModel::ExpertYears() const {
  std::vector<int> years;
  if (regime_.variant != Regime::kYearly) return years;
  for (const auto &[y, table] : years_) years.push_back(y);
  return years;
}

int TemporalCountModel::RouteYear(int query_year) const {
  if (regime_.variant != Regime::kYearly) {
    throw RuntimeError("RouteYear needs a Yearly model");
  }
  if (years_.empty()) throw RuntimeError("Yearly model has no experts");
  int best = years_.begin()->first;
  for (const auto &[y, table] : years_) {
    // Ascending iteration with <= sends ties to the later year.
    if (std::abs(y - query_year) <= std::abs(best - query_year)) best = y;
  }
  return best;
}

TemporalCountModel TemporalCountModel::Expert(int year) const {
  auto it = years_.find(year);
  if (regime_.variant != Regime::kYearly || it == years_.end()) {
    throw ValidationError("no expert for year " + std::to_string(year));
  }
  TemporalCountModel expert({Regime::kUniform, {}}, options_);
  expert.global_ = it->second;
  expert.steps_ = static_cast<size_t>(std::max(1.0, std::ceil(it->second.prior.total)));
  return expert;
}

size_t TemporalCountModel::vocab_size() const {
  if (regime_.variant != Regime::kYearly) return global_.prior.counts.size();
  std::set<std::string> vocab;
  for (const auto &[y, table] : years_) {
    for (const auto &[a, c] : table.prior.counts) vocab.insert(a);
  }
  return vocab.size();
}

double TemporalCountModel::Smoothed(const Counter *counter, const std::string &answer,
                                    size_t vocab) const {
  const double k = options_.smoothing_k;
  double c = counter ? counter->Get(answer) : 0.0;
  double n = counter ? counter->total : 0.0;
  return (c + k) / (n + k * (static_cast<double>(vocab) + 1.0));
}

double TemporalCountModel::TableProb(const Table &table, const std::string &key,
                                     const std::string &answer) const {
  const Counter *c = table.Find(key);
  return Smoothed(c ? c : &table.prior, answer, table.prior.counts.size());
}

const TemporalCountModel::Table &TemporalCountModel::ScoringTable(int year) const {
  if (regime_.variant == Regime::kYearly) return years_.at(RouteYear(year));
  return global_;
}

double TemporalCountModel::KeyProb(const std::string &key, int year,
                                   const std::string &answer) const {
  switch (regime_.variant) {
    case Regime::kUniform:
      return TableProb(global_, key, answer);
    case Regime::kYearly:
      return TableProb(ScoringTable(year), key, answer);
    case Regime::kTemporal: {
      const double lambda = options_.lambda;
      double p_global = TableProb(global_, key, answer);
      if (lambda == 0.0) return p_global;
      const Counter *cell = nullptr;
      auto it = years_.find(year);
      if (it != years_.end()) cell = it->second.Find(key);
      double p_year = Smoothed(cell, answer, global_.prior.counts.size());
      return lambda * p_year + (1.0 - lambda) * p_global;
    }
  }
  return 0.0;
}

double TemporalCountModel::Probability(const std::string &input, int year,
                                       const std::string &target) const {
  return KeyProb(NormalizeKey(input), year, target);
}

SpanScore TemporalCountModel::Score(const std::string &input, int year,
                                    const std::string &target) const {
  if (input.find(kMaskLiteral) == std::string::npos) {
    throw ValidationError("input has no mask literal: '" + input + "'");
  }
  return {std::log(Probability(input, year, target)), TargetLength(target)};
}

std::vector<RankedAnswer> TemporalCountModel::Predict(const std::string &input, int year,
                                                      size_t top_n) const {
  if (!trained()) throw RuntimeError("model is untrained");
  const std::string key = NormalizeKey(input);
  const Table &vocab_table = ScoringTable(year);
  std::vector<RankedAnswer> ranked;
  ranked.reserve(vocab_table.prior.counts.size());
  for (const auto &[answer, count] : vocab_table.prior.counts) {
    ranked.push_back({answer, std::log(KeyProb(key, year, answer))});
  }
  auto better = [](const RankedAnswer &a, const RankedAnswer &b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return a.answer < b.answer;
  };
  if (top_n < ranked.size()) {
    std::partial_sort(ranked.begin(), ranked.begin() + top_n, ranked.end(), better);
    ranked.resize(top_n);
  } else {
    std::sort(ranked.begin(), ranked.end(), better);
  }
  return ranked;
}

std::vector<double> TemporalCountModel::CandidateDistribution(
    const std::string &input, int year, const std::vector<std::string> &candidates) const {
  if (candidates.empty()) throw ValidationError("candidate set is empty");
  const std::string key = NormalizeKey(input);
  std::vector<double> probs;
  probs.reserve(candidates.size());
  double sum = 0.0;
  for (const std::string &c : candidates) {
    probs.push_back(KeyProb(key, year, c));
    sum += probs.back();
  }
  for (double &p : probs) p /= sum;
  return probs;
}

std::string TemporalCountModel::Serialize() const {
  std::ostringstream out;
  out << kMagic << "\n";
  out << "regime\t" << RegimeName(regime_.variant) << "\n";
  std::vector<std::string> experts;
  for (int y : regime_.expert_years) experts.push_back(std::to_string(y));
  out << "expert_years\t" << (experts.empty() ? "auto" : Join(experts, ",")) << "\n";
  out << "smoothing_k\t" << FormatDouble(options_.smoothing_k) << "\n";
  out << "lambda\t" << FormatDouble(options_.lambda) << "\n";
  out << "recency_decay\t" << FormatDouble(options_.recency_decay) << "\n";
  out << "increment\t" << FormatDouble(increment_) << "\n";
  out << "steps\t" << steps_ << "\n";
  std::vector<std::string> lines;
  auto dump = [&](const std::string &name, const Table &table) {
    for (const auto &[key, counter] : table.by_key) {
      for (const auto &[answer, count] : counter.counts) {
        lines.push_back("count\t" + name + "\t" + Escape(key) + "\t" + Escape(answer) +
                        "\t" + FormatDouble(count));
      }
    }
  };
  if (regime_.variant != Regime::kYearly) dump("global", global_);
  for (const auto &[y, table] : years_) dump(std::to_string(y), table);
  std::sort(lines.begin(), lines.end());
  for (const std::string &line : lines) out << line << "\n";
  return out.str();
}

void TemporalCountModel::AddCount(const std::string &table, const std::string &key,
                                  const std::string &answer, double weight) {
  if (table == "global") {
    global_.Add(key, answer, weight);
  } else {
    years_[ParseInt(table, "table year")].Add(key, answer, weight);
  }
}

TemporalCountModel TemporalCountModel::Deserialize(std::string_view text,
                                                   const std::string &source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int row = 0;
  auto next = [&](const char *field) {
    if (!std::getline(in, line)) {
      throw ParseError(source, row + 1, 1, std::string("missing ") + field);
    }
    ++row;
    std::vector<std::string> parts = Split(line, '\t');
    if (parts.size() != 2 || parts[0] != field) {
      throw ParseError(source, row, 1, std::string("expected ") + field);
    }
    return parts[1];
  };
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError(source, 1, 1, "not a count model file");
  }
  ++row;
  ModelRegime regime;
  regime.variant = ParseRegime(next("regime"));
  std::string experts = next("expert_years");
  if (experts != "auto") {
    for (const std::string &y : Split(experts, ',')) {
      regime.expert_years.push_back(ParseInt(y, "expert year"));
    }
  }
  CountModelOptions options;
  options.smoothing_k = ParseDouble(next("smoothing_k"), "smoothing_k");
  options.lambda = ParseDouble(next("lambda"), "lambda");
  options.recency_decay = ParseDouble(next("recency_decay"), "recency_decay");
  double increment = ParseDouble(next("increment"), "increment");
  std::string steps = next("steps");
  TemporalCountModel model(regime, options);
  model.increment_ = increment;
  model.steps_ = static_cast<size_t>(ParseInt(steps, "steps"));
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> parts = Split(line, '\t');
    if (parts.size() != 5 || parts[0] != "count") {
      throw ParseError(source, row, 1, "expected count<TAB>table<TAB>key<TAB>answer<TAB>value");
    }
    double value = ParseDouble(parts[4], "count");
    if (!(value > 0.0)) throw ParseError(source, row, 5, "count must be positive");
    bool global_table = parts[1] == "global";
    bool fits = global_table ? regime.variant != Regime::kYearly
                             : regime.variant != Regime::kUniform;
    if (!fits) {
      throw ParseError(source, row, 2, "table '" + parts[1] + "' does not fit the regime");
    }
    model.AddCount(parts[1], Unescape(parts[2]), Unescape(parts[3]), value);
  }
  return model;
}

void TemporalCountModel::Save(const std::string &path) const { WriteFile(path, Serialize()); }

TemporalCountModel TemporalCountModel::Load(const std::string &path) {
  return Deserialize(ReadFile(path), path);
}

}  // namespace tprobe
