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

#include "doctest.h"
#include "tprobe/config.h"

namespace tprobe {
namespace {

TEST_CASE("defaults validate and round-trip") {
  RunConfig c;
  c.Validate();
  CHECK(RunConfig::Parse(c.Serialize(), "c") == c);
  CHECK(c.ContinuationSteps() == c.steps / 6);
}

TEST_CASE("edited configs round-trip") {
  RunConfig c;
  c.seed = 18446744073709551615ull;
  c.lambda = 0.1 + 0.2;
  c.alpha_grid = {0.0, 1.0 / 3.0, 1.0};
  c.regime = Regime::kYearly;
  c.input_style = InputStyle::kInYear;
  c.mix_corpus = 50;
  c.mix_probe = 3;
  c.date_coarse_formats = {"year"};
  c.adapt_new_slice = {2020, 2020};
  c.facts = "f.tsv";
  c.docs = "d.jsonl";
  CHECK(RunConfig::Parse(c.Serialize(), "c") == c);
}

TEST_CASE("shortest double formatting") {
  CHECK(FormatShortest(0.1) == "0.1");
  CHECK(FormatShortest(0.5) == "0.5");
  CHECK(FormatShortest(0.1 + 0.2) == "0.30000000000000004");
  CHECK(FormatShortest(5.0) == "5");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(RunConfig::Parse("seed = 1\nbogus = 2\n", "cfg"),
                       doctest::Contains("cfg:2"), ParseError);
  CHECK_THROWS_AS(RunConfig::Parse("seed = 1\nseed = 2\n", "cfg"), ParseError);
  CHECK_THROWS_AS(RunConfig::Parse("no equals sign\n", "cfg"), ParseError);
  CHECK_THROWS_AS(RunConfig::Parse("lambda = high\n", "cfg"), ParseError);
  CHECK_THROWS_AS(RunConfig::Parse("seed = -3\n", "cfg"), ParseError);
  CHECK(RunConfig::Parse("# comment\n\n  seed = 9  \n", "cfg").seed == 9);
}

TEST_CASE("validation names the field") {
  auto fails = [](const std::string &key, const std::string &value) {
    RunConfig c;
    c.Set(key, value);
    try {
      c.Validate();
    } catch (const ValidationError &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(fails("lambda", "1.5").find("config: lambda:") == 0);
  CHECK(fails("train_years", "2005:2012").find("config: train_years:") == 0);
  CHECK(fails("future_years", "2017:2019").find("config: future_years:") == 0);
  CHECK(fails("alpha_grid", "0,2").find("config: alpha_grid[1]:") == 0);
  CHECK(fails("smoothing_k", "0").find("config: smoothing_k:") == 0);
  CHECK(fails("facts", "x.tsv").find("config: docs:") == 0);
  CHECK(fails("steps", "0").find("config: steps:") == 0);
  CHECK(fails("seed", "7").empty());
}

}  // namespace
}  // namespace tprobe
