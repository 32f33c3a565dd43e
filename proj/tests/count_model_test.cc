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

#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.h"
#include "tprobe/count_model.h"
#include "tprobe/evaluator.h"
#include "tprobe/external_model.h"
#include "tprobe/sampling.h"

namespace tprobe {
namespace {

MaskedExample Ex(const std::string &input, const std::string &target, int year) {
  MaskedExample e;
  e.input = input;
  e.target = target;
  e.year = year;
  return e;
}

// "plays for A" in 2011-2013, "plays for B" in 2014-2016, one example each.
std::vector<MaskedExample> Conflicting() {
  std::vector<MaskedExample> out;
  for (int y = 2011; y <= 2016; ++y) out.push_back(Ex("Ann plays for _X_.", y <= 2013 ? "A" : "B", y));
  out.push_back(Ex("Ann plays for _X_.", "A", 2012));
  return out;
}

TemporalCountModel Trained(Regime regime, const std::vector<MaskedExample> &ex,
                           CountModelOptions options = {}) {
  TemporalCountModel m({regime, {}}, options);
  VectorStream s(ex);
  m.Train(s, ex.size());
  return m;
}

TEST_CASE("keys normalize case, punctuation and prefix") {
  CHECK(NormalizeKey("year: 2014 Ann  plays for _X_!") == "ann plays for _X_");
  CHECK(NormalizeKey("ANN, plays for _X_.") == NormalizeKey("ann plays for _X_"));
}

TEST_CASE("add-k closed forms") {
  CountModelOptions o;
  o.smoothing_k = 1.0;
  TemporalCountModel m = Trained(Regime::kUniform, {Ex("a _X_", "y", 2010)}, o);
  CHECK(m.Probability("a _X_", 2010, "y") == doctest::Approx(2.0 / 3).epsilon(1e-12));
  // Unseen key falls back to the prior: k / (N + k(|V|+1)) for an unseen answer.
  CHECK(m.Probability("zz _X_", 2010, "never") == doctest::Approx(1.0 / 3).epsilon(1e-12));
  o.smoothing_k = 0.1;
  TemporalCountModel m2 = Trained(Regime::kUniform, {Ex("a _X_", "y", 2010), Ex("b _X_", "z", 2010)}, o);
  CHECK(m2.Probability("q _X_", 2010, "never") == doctest::Approx(0.1 / (2 + 0.1 * 3)));
}

TEST_CASE("temporal separates conflicting years, uniform averages") {
  TemporalCountModel t = Trained(Regime::kTemporal, Conflicting());
  TemporalCountModel u = Trained(Regime::kUniform, Conflicting());
  CHECK(t.Predict("Ann plays for _X_.", 2012, 1)[0].answer == "A");
  CHECK(t.Predict("Ann plays for _X_.", 2015, 1)[0].answer == "B");
  for (int y = 2011; y <= 2016; ++y) {
    CHECK(u.Predict("Ann plays for _X_.", y, 1)[0].answer == "A");
    std::vector<std::string> cands = {"A", "B"};
    CHECK(Entropy(u.CandidateDistribution("Ann plays for _X_.", y, cands)) >
          Entropy(t.CandidateDistribution("Ann plays for _X_.", y, cands)));
  }
}

TEST_CASE("property: scores normalize over vocab and unk") {
  testing::Gen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<MaskedExample> ex;
    int n = gen.Int(1, 60);
    for (int i = 0; i < n; ++i) {
      ex.push_back(Ex("k" + std::to_string(gen.Int(0, 4)) + " _X_", "v" + std::to_string(gen.Int(0, 7)),
                      gen.Int(2010, 2014)));
    }
    CountModelOptions o;
    o.smoothing_k = 0.05 + gen.Real01();
    o.lambda = gen.Real01();
    for (Regime r : {Regime::kUniform, Regime::kYearly, Regime::kTemporal}) {
      TemporalCountModel m = Trained(r, ex, o);
      for (int year : {2009, 2012, 2016}) {
        for (const std::string key : {"k0 _X_", "k3 _X_", "unseen _X_"}) {
          double total = m.Probability(key, year, "<unk-answer>");
          for (const RankedAnswer &a : m.Predict(key, year, 1000)) total += std::exp(a.log_prob);
          CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("degenerate regimes reproduce uniform") {
  testing::Gen gen(8);
  std::vector<MaskedExample> ex;
  for (int i = 0; i < 200; ++i) {
    ex.push_back(Ex("k" + std::to_string(gen.Int(0, 5)) + " _X_", "v" + std::to_string(gen.Int(0, 5)),
                    gen.Int(2010, 2013)));
  }
  CountModelOptions zero;
  zero.lambda = 0.0;
  TemporalCountModel u = Trained(Regime::kUniform, ex);
  TemporalCountModel t = Trained(Regime::kTemporal, ex, zero);
  TemporalCountModel y({Regime::kYearly, {2012}}, {});
  VectorStream s(ex);
  y.Train(s, ex.size());
  for (int k = 0; k < 7; ++k) {
    std::string key = "k" + std::to_string(k) + " _X_";
    for (int v = 0; v < 7; ++v) {
      std::string ans = "v" + std::to_string(v);
      CHECK(t.Score(key, 2011, ans).log_prob == u.Score(key, 2011, ans).log_prob);
      CHECK(y.Score(key, 2011, ans).log_prob == doctest::Approx(u.Score(key, 2011, ans).log_prob).epsilon(1e-12));
    }
  }
}

TEST_CASE("yearly routing picks the nearest expert, ties to the later") {
  TemporalCountModel m({Regime::kYearly, {}}, {});
  VectorStream s({Ex("a _X_", "x", 2010), Ex("a _X_", "y", 2012)});
  m.Train(s, 2);
  CHECK(m.RouteYear(2011) == 2012);
  CHECK(m.RouteYear(2009) == 2010);
  CHECK(m.RouteYear(2030) == 2012);
  CHECK(m.ExpertYears() == std::vector<int>{2010, 2012});
  CHECK(m.Expert(2010).Predict("a _X_", 2099, 1)[0].answer == "x");
  CHECK_THROWS_AS(m.Expert(2011), ValidationError);
}

TEST_CASE("training errors") {
  TemporalCountModel m({Regime::kUniform, {}}, {});
  VectorStream empty({});
  CHECK_THROWS_AS(m.Train(empty, 10), ValidationError);
  VectorStream one({Ex("a _X_", "b", 2010)});
  CHECK_THROWS_AS(m.Train(one, 0), ValidationError);
  CHECK_THROWS_WITH_AS(m.Predict("a _X_", 2010, 1), "model is untrained", RuntimeError);
  CHECK_THROWS_AS(m.Score("no mask", 2010, "b"), ValidationError);
}

TEST_CASE("recency decay favours late examples") {
  CountModelOptions o;
  o.recency_decay = 0.5;
  std::vector<MaskedExample> ex = {Ex("a _X_", "old", 2010), Ex("a _X_", "old", 2010),
                                   Ex("a _X_", "new", 2011)};
  TemporalCountModel m = Trained(Regime::kUniform, ex, o);
  CHECK(m.Predict("a _X_", 2011, 1)[0].answer == "new");
  TemporalCountModel plain = Trained(Regime::kUniform, ex);
  CHECK(plain.Predict("a _X_", 2011, 1)[0].answer == "old");
}

TEST_CASE("candidate distributions") {
  TemporalCountModel m = Trained(Regime::kUniform, {Ex("x _X_", "c0", 2010)});
  std::vector<std::string> cands;
  for (int i = 0; i < 249; ++i) cands.push_back("country" + std::to_string(i));
  std::vector<double> p = m.CandidateDistribution("unseen _X_", 2010, cands);
  for (double v : p) CHECK(v == doctest::Approx(1.0 / 249).epsilon(1e-12));
  std::vector<MaskedExample> heavy(500, Ex("x _X_", "c0", 2010));
  TemporalCountModel h = Trained(Regime::kUniform, heavy);
  std::vector<double> q = h.CandidateDistribution("x _X_", 2010, {"c0", "c1", "c2"});
  CHECK(q[0] > 0.99);
  double sum = 0;
  for (double v : q) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("serialization round-trips scores exactly") {
  CountModelOptions o;
  o.recency_decay = 0.01;
  for (Regime r : {Regime::kUniform, Regime::kYearly, Regime::kTemporal}) {
    TemporalCountModel m = Trained(r, Conflicting(), o);
    std::string text = m.Serialize();
    TemporalCountModel back = TemporalCountModel::Deserialize(text, "m");
    CHECK(back.Serialize() == text);
    for (int y = 2010; y <= 2017; ++y) {
      for (const char *a : {"A", "B", "C"}) {
        CHECK(back.Score("Ann plays for _X_.", y, a).log_prob ==
              m.Score("Ann plays for _X_.", y, a).log_prob);
      }
    }
  }
  CHECK_THROWS_AS(TemporalCountModel::Deserialize("garbage\n", "g"), ParseError);
}

TEST_CASE("training twice on the same stream gives identical tables") {
  TemporalCountModel a = Trained(Regime::kTemporal, Conflicting());
  TemporalCountModel b = Trained(Regime::kTemporal, Conflicting());
  CHECK(a.Serialize() == b.Serialize());
}

TEST_CASE("external model protocol matches the in-process model") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "tprobe_external_test";
  fs::create_directories(dir);
  std::string path = (dir / "m.txt").string();
  TemporalCountModel m = Trained(Regime::kTemporal, Conflicting());
  m.Save(path);
  std::unique_ptr<Model> loaded = LoadModel("count:" + path);
  ExternalModel remote(testing::CliPath() + " serve-model --model count:" + path);
  for (int y : {2012, 2015}) {
    CHECK(remote.Score("Ann plays for _X_.", y, "A").log_prob ==
          doctest::Approx(m.Score("Ann plays for _X_.", y, "A").log_prob).epsilon(1e-12));
    CHECK(remote.Predict("Ann plays for _X_.", y, 2) == loaded->Predict("Ann plays for _X_.", y, 2));
    std::vector<double> a = remote.CandidateDistribution("Ann plays for _X_.", y, {"A", "B"});
    std::vector<double> b = m.CandidateDistribution("Ann plays for _X_.", y, {"A", "B"});
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(remote.Score("no mask here", 2012, "A"), RuntimeError);
}

}  // namespace
}  // namespace tprobe
