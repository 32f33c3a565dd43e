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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "tprobe/count_model.h"
#include "tprobe/evaluator.h"
#include "tprobe/sampling.h"

namespace tprobe {
namespace {

// Answers with a fixed string per query text.
class LookupModel : public Model {
 public:
  explicit LookupModel(std::map<std::string, std::string> answers) : answers_(std::move(answers)) {}
  SpanScore Score(const std::string &, int, const std::string &) const override { return {}; }
  std::vector<RankedAnswer> Predict(const std::string &input, int, size_t) const override {
    auto it = answers_.find(input);
    if (it == answers_.end()) throw RuntimeError("no answer");
    return {{it->second, 0.0}};
  }
  std::vector<double> CandidateDistribution(const std::string &, int,
                                            const std::vector<std::string> &c) const override {
    return std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size()));
  }

 private:
  std::map<std::string, std::string> answers_;
};

TEST_CASE("normalization examples") {
  CHECK(NormalizeAnswer("The Lakers!") == "lakers");
  CHECK(NormalizeAnswer("") == "");
  CHECK(NormalizeAnswer("Liverpool F.C.") == "liverpool fc");
}

TEST_CASE("token f1 examples") {
  CHECK(TokenF1("Liverpool F.C.", "Liverpool") == doctest::Approx(2.0 / 3));
  CHECK(TokenF1("same words", "same words") == 1.0);
  CHECK(TokenF1("red", "blue") == 0.0);
  CHECK(TokenF1("", "") == 1.0);
  CHECK(TokenF1("the", "x") == 0.0);
  CHECK(MaxF1("X Y", {"X", "Y"}) == doctest::Approx(2.0 / 3));
  CHECK(MaxF1("Y", {"X", "Y"}) == 1.0);
  CHECK_THROWS_AS(MaxF1("x", {}), ValidationError);
}

TEST_CASE("property: f1 equals the reference on random pairs") {
  testing::Gen gen(2024);
  for (int i = 0; i < 1000; ++i) {
    std::string a = gen.AnswerText(), b = gen.AnswerText();
    CHECK(NormalizeAnswer(a) == testing::RefNormalize(a));
    double f = TokenF1(a, b);
    CHECK(std::abs(f - testing::RefTokenF1(a, b)) <= 1e-12);
    CHECK(f == TokenF1(b, a));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    std::vector<std::string> golds = {b};
    double before = MaxF1(a, golds);
    golds.push_back(gen.AnswerText());
    CHECK(MaxF1(a, golds) >= before);
    CHECK(std::abs(MaxF1(a, golds) - testing::RefMaxF1(a, golds)) <= 1e-12);
  }
}

TEST_CASE("macro is the unweighted mean of year means") {
  F1Result r;
  r.per_query = {{"a", 2010, 0.2, "", ""}, {"b", 2011, 0.8, "", ""}, {"c", 2011, 0.8, "", ""}};
  Aggregate(r, {2010, 2010}, {2011, 2011});
  CHECK(r.macro == doctest::Approx(0.5));
  CHECK(*r.seen_macro == doctest::Approx(0.2));
  CHECK(*r.future_macro == doctest::Approx(0.8));
  CHECK_THROWS_AS(MacroAverage({}), ValidationError);
}

TEST_CASE("property: duplicating queries leaves the aggregates unchanged") {
  testing::Gen gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    F1Result r, d;
    int n = gen.Int(1, 40);
    for (int i = 0; i < n; ++i) {
      QueryF1 q{"q" + std::to_string(i), gen.Int(2010, 2020), gen.Real01(), "", ""};
      r.per_query.push_back(q);
      d.per_query.push_back(q);
      d.per_query.push_back(q);
    }
    Aggregate(r, {2010, 2018}, {2019, 2020});
    Aggregate(d, {2010, 2018}, {2019, 2020});
    CHECK(r.macro == doctest::Approx(d.macro).epsilon(1e-12));
    CHECK(r.per_year.size() == d.per_year.size());
  }
}

TEST_CASE("evaluate f1 records failures as zero") {
  std::vector<ClozeQuery> qs(3);
  qs[0] = {"1", 2010, "q1 _X_", {"Alpha"}, "P", "S1", 1};
  qs[1] = {"2", 2011, "q2 _X_", {"Beta Gamma"}, "P", "S2", 1};
  qs[2] = {"3", 2011, "q3 _X_", {"x"}, "P", "S3", 1};
  LookupModel m({{"q1 _X_", "alpha"}, {"q2 _X_", "Gamma"}});
  F1Result r = EvaluateF1(m, qs);
  CHECK(r.failures == 1);
  CHECK(r.per_query[2].f1 == 0.0);
  CHECK_FALSE(r.per_query[2].error.empty());
  CHECK(r.per_year.at(2010) == 1.0);
  CHECK(r.per_year.at(2011) == doctest::Approx(1.0 / 3));
}

TEST_CASE("input styles") {
  CHECK(RenderInput("A _X_.", 2014, InputStyle::kPlain) == "A _X_.");
  CHECK(RenderInput("A _X_.", 2014, InputStyle::kTimePrefix) == "year: 2014 A _X_.");
  CHECK(RenderInput("A _X_.", 2014, InputStyle::kInYear) == "In 2014, A _X_.");
  CHECK(ParseInputStyle(InputStyleName(InputStyle::kInYear)) == InputStyle::kInYear);
}

TEST_CASE("perplexity closed forms") {
  CHECK(MlmPerplexity({{0.0, 1}, {0.0, 3}}) == 1.0);
  CHECK(MlmPerplexity({{std::log(0.01), 1}}) == doctest::Approx(100.0).epsilon(1e-11));
  CHECK(std::abs(MlmPerplexity({{-2.0, 2}, {-4.0, 1}}) - std::exp(2.0)) <= 1e-9);
  CHECK_THROWS_AS(MlmPerplexity({}), ValidationError);
  CHECK_THROWS_AS(MlmPerplexity({{0.0, 0}}), ValidationError);
}

TEST_CASE("property: a certain extra span lowers perplexity") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpanScore> s;
    int n = gen.Int(1, 6);
    for (int i = 0; i < n; ++i) s.push_back({-gen.Real01() * 5 - 0.01, gen.Int(1, 4)});
    double before = MlmPerplexity(s);
    s.push_back({0.0, gen.Int(1, 4)});
    CHECK(MlmPerplexity(s) < before);
  }
}

TEST_CASE("entropy bounds and invariance") {
  CHECK(Entropy({1.0, 0.0}) == 0.0);
  std::vector<double> u(249, 1.0 / 249);
  CHECK(std::abs(Entropy(u) - std::log(249.0)) <= 1e-9);
  testing::Gen gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(gen.Int(1, 20));
    double z = 0;
    for (double &v : p) z += (v = gen.Real01());
    for (double &v : p) v /= z;
    double h = Entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(p.size())) + 1e-12);
    std::reverse(p.begin(), p.end());
    CHECK(Entropy(p) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("bootstrap interval uses the documented order statistics") {
  std::vector<double> v = {0.0, 1.0, 0.5, 0.25, 1.0, 0.0, 0.75};
  const size_t R = 200;
  Interval ci = BootstrapInterval(v, R, 42);
  Rng rng(42);
  std::vector<double> stats;
  for (size_t r = 0; r < R; ++r) {
    double s = 0;
    for (size_t i = 0; i < v.size(); ++i) s += v[rng.UniformIndex(v.size())];
    stats.push_back(s / static_cast<double>(v.size()));
  }
  std::sort(stats.begin(), stats.end());
  CHECK(ci.low == stats[5]);    // floor(0.025 * 200)
  CHECK(ci.high == stats[194]);  // ceil(0.975 * 200) - 1
  CHECK(ci.low <= ci.high);
}

TEST_CASE("gap curve enumerates every expert pair") {
  std::vector<PairScores> pairs;
  for (int a = 2010; a <= 2012; ++a) {
    for (int b = 2010; b <= 2012; ++b) {
      pairs.push_back({a, b, {a == b ? 1.0 : 0.5, a == b ? 1.0 : 0.0}});
    }
  }
  GapCurve c = AggregateGapCurve(pairs, 100, 1);
  CHECK(c.size() == 5);
  CHECK(c.at(0).pairs == 3);
  CHECK(c.at(0).mean == 1.0);
  CHECK(c.at(2).pairs == 1);
  CHECK(c.at(-1).mean == 0.25);
  CHECK(c.at(-1).queries == 4);
}

TEST_CASE("gap curve needs two experts and every test set") {
  testing::ConstantModel m(0.0);
  std::map<int, std::vector<ClozeQuery>> tests = {{2010, {}}};
  CHECK_THROWS_AS(ComputeGapCurve({{2010, &m}}, tests), ValidationError);
  CHECK_THROWS_AS(ComputeGapCurve({{2010, &m}, {2011, &m}}, tests), ValidationError);
}

TEST_CASE("duration buckets equal an independent group-by") {
  testing::Gen gen(77);
  std::vector<ClozeQuery> qs;
  F1Result r;
  for (int i = 0; i < 500; ++i) {
    ClozeQuery q;
    q.id = "q" + std::to_string(i);
    q.year = 2010;
    q.duration_years = gen.Int(1, 14);
    qs.push_back(q);
    r.per_query.push_back({q.id, 2010, gen.Real01(), "", ""});
  }
  std::map<int, BucketStat> b = DurationBuckets(r, qs, 5, 50, 3);
  std::map<int, std::pair<double, size_t>> ref;
  for (size_t i = 0; i < qs.size(); ++i) {
    int bucket = std::min(qs[i].duration_years, 5);
    ref[bucket].first += r.per_query[i].f1;
    ++ref[bucket].second;
  }
  REQUIRE(b.size() == ref.size());
  for (const auto &[bucket, acc] : ref) {
    CHECK(b.at(bucket).count == acc.second);
    CHECK(std::abs(b.at(bucket).mean - acc.first / static_cast<double>(acc.second)) <= 1e-12);
  }
}

TEST_CASE("future log-likelihood is flat for a year-blind model") {
  std::vector<MaskedExample> ex;
  for (int y = 2010; y <= 2014; ++y) {
    MaskedExample e;
    e.input = "A plays for _X_.";
    e.target = y < 2013 ? "B" : "C";
    e.year = y;
    ex.push_back(e);
  }
  TemporalCountModel u({Regime::kUniform, {}}, {});
  VectorStream s(ex);
  u.Train(s, ex.size());
  std::vector<AnchorQuery> anchors = {{"A plays for _X_.", "B", true}};
  auto curve = FutureLoglikCurve(u, anchors, 2014, 3);
  for (const LoglikPoint &p : curve.at("multiple")) CHECK(p.delta == 0.0);
  CHECK(curve.at("multiple").front().year == 2014);
  CHECK(curve.at("single").front().count == 0);
}

TEST_CASE("anchor selection marks multi-answer pairs") {
  std::vector<ClozeQuery> qs = {{"1", 2017, "a _X_", {"X"}, "P", "S1", 1},
                                {"2", 2018, "a _X_", {"Y"}, "P", "S1", 1},
                                {"3", 2018, "b _X_", {"Z"}, "P", "S2", 2}};
  LookupModel m({{"a _X_", "Y"}, {"b _X_", "Z"}});
  std::vector<AnchorQuery> a = SelectAnchorQueries(m, qs, 2018);
  REQUIRE(a.size() == 2);
  CHECK(a[0].multiple);
  CHECK_FALSE(a[1].multiple);
}

}  // namespace
}  // namespace tprobe
