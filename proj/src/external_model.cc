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

#include "tprobe/external_model.h"

#include <istream>
#include <ostream>

#include "json.hpp"
#include "tprobe/common.h"

namespace tprobe {

namespace {

using nlohmann::json;

json Call(Subprocess &process, const json &request) {
  try {
    process.WriteLine(request.dump());
    json response = json::parse(process.ReadLine());
    if (response.contains("error")) {
      throw RuntimeError(response["error"].get<std::string>());
    }
    return response;
  } catch (const json::exception &e) {
    throw RuntimeError("model '" + process.command() + "': bad response: " + e.what());
  } catch (const RuntimeError &e) {
    throw RuntimeError("model '" + process.command() + "': " + e.what());
  }
}

}  // namespace

ExternalModel::ExternalModel(const std::string &command) : process_(command) {}

SpanScore ExternalModel::Score(const std::string &input, int year,
                               const std::string &target) const {
  json r = Call(process_, {{"op", "score"}, {"input", input}, {"year", year},
                           {"target", target}});
  SpanScore s{r.at("log_prob").get<double>(),
              r.value("target_len", TargetLength(target))};
  if (s.log_prob > 0.0 || s.target_len < 1) {
    throw RuntimeError("model '" + process_.command() + "' returned an invalid score");
  }
  return s;
}

std::vector<RankedAnswer> ExternalModel::Predict(const std::string &input, int year,
                                                 size_t top_n) const {
  json r = Call(process_, {{"op", "predict"}, {"input", input}, {"year", year},
                           {"top_n", top_n}});
  std::vector<RankedAnswer> out;
  for (const json &a : r.at("answers")) {
    out.push_back({a.at("answer").get<std::string>(), a.at("log_prob").get<double>()});
  }
  return out;
}

std::vector<double> ExternalModel::CandidateDistribution(
    const std::string &input, int year, const std::vector<std::string> &candidates) const {
  json r = Call(process_, {{"op", "dist"}, {"input", input}, {"year", year},
                           {"candidates", candidates}});
  std::vector<double> probs = r.at("probs").get<std::vector<double>>();
  if (probs.size() != candidates.size()) {
    throw RuntimeError("model '" + process_.command() + "' returned " +
                       std::to_string(probs.size()) + " probabilities for " +
                       std::to_string(candidates.size()) + " candidates");
  }
  return probs;
}

size_t ServeModel(const Model &model, std::istream &in, std::ostream &out) {
  size_t served = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    json response;
    try {
      json request = json::parse(line);
      std::string op = request.at("op").get<std::string>();
      std::string input = request.at("input").get<std::string>();
      int year = request.at("year").get<int>();
      if (op == "score") {
        SpanScore s = model.Score(input, year, request.at("target").get<std::string>());
        response = {{"log_prob", s.log_prob}, {"target_len", s.target_len}};
      } else if (op == "predict") {
        json answers = json::array();
        for (const RankedAnswer &a :
             model.Predict(input, year, request.value("top_n", size_t{10}))) {
          answers.push_back({{"answer", a.answer}, {"log_prob", a.log_prob}});
        }
        response = {{"answers", answers}};
      } else if (op == "dist") {
        response = {{"probs", model.CandidateDistribution(
                                  input, year,
                                  request.at("candidates").get<std::vector<std::string>>())}};
      } else {
        response = {{"error", "unknown op '" + op + "'"}};
      }
    } catch (const std::exception &e) {
      response = {{"error", e.what()}};
    }
    out << response.dump() << "\n";
    out.flush();
    ++served;
  }
  return served;
}

}  // namespace tprobe
