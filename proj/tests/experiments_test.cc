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

#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "tprobe/common.h"
#include "tprobe/experiments.h"

namespace tprobe {
namespace {

namespace fs = std::filesystem;

RunConfig SmallConfig() {
  RunConfig c;
  c.world_subjects = 24;
  c.world_controls = 6;
  c.world_docs_per_year = 6;
  c.steps = 6000;
  c.bootstrap_resamples = 50;
  c.date_pairs = 400;
  c.date_train_pairs = 2000;
  c.alpha_grid = {0.0, 0.5, 1.0};
  return c;
}

fs::path Scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("tprobe_exp_" + name);
  fs::remove_all(p);
  return p;
}

TEST_CASE("every flow is deterministic to the byte") {
  RunConfig c = SmallConfig();
  for (const std::string &flow : FlowNames()) {
    fs::path a = Scratch(flow + "_a"), b = Scratch(flow + "_b");
    RunExperiment(c, flow, a.string());
    RunExperiment(c, flow, b.string());
    size_t files = 0;
    for (const auto &entry : fs::directory_iterator(a)) {
      ++files;
      std::string name = entry.path().filename().string();
      INFO(flow << "/" << name);
      CHECK(ReadFile(entry.path().string()) == ReadFile((b / name).string()));
    }
    CHECK(files >= 4);
    CHECK(fs::exists(a / "report.json"));
    CHECK(fs::exists(a / "manifest.json"));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST_CASE("adapt yields one row per regime and alpha") {
  RunConfig c = SmallConfig();
  ExperimentData data = PrepareData(c);
  AdaptResult r = RunAdapt(c, data);
  CHECK(r.rows.size() == 6);
  CHECK(r.continuation_steps == c.steps / 6);
  CHECK(r.decay == doctest::Approx(c.adapt_forgetting / (c.steps / 6)));
  for (const AdaptRow &row : r.rows) {
    if (row.alpha == 0.0) CHECK(row.new_fraction == 0.0);
    if (row.alpha == 1.0) CHECK(row.new_fraction == 1.0);
  }
}

TEST_CASE("seed changes the outputs") {
  RunConfig c = SmallConfig();
  ExperimentData a = PrepareData(c);
  c.seed = 2;
  ExperimentData b = PrepareData(c);
  CHECK(a.queries.size() > 0);
  CHECK(QueriesToJsonl(a.queries) != QueriesToJsonl(b.queries));
}

TEST_CASE("manifest records the run") {
  RunConfig c = SmallConfig();
  fs::path f = Scratch("hash_input.txt");
  WriteFile(f.string(), "a");
  nlohmann::json m = nlohmann::json::parse(ManifestJson(c, "memorize", {{"facts", f.string()}}));
  CHECK(m["tool"] == "tprobe");
  CHECK(m["version"] == std::string(kVersion));
  CHECK(m["flow"] == "memorize");
  CHECK(m["seed"] == 1);
  CHECK(m["config"] == c.Serialize());
  REQUIRE(m["inputs"].size() == 1);
  CHECK(m["inputs"][0]["role"] == "facts");
  CHECK(m["inputs"][0]["fnv1a64"] == HexId(StableHash("a")));
  fs::remove(f);
}

TEST_CASE("unknown flow is a validation error") {
  CHECK_THROWS_AS(RunExperiment(SmallConfig(), "dance", Scratch("none").string()),
                  ValidationError);
}

}  // namespace
}  // namespace tprobe
