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

// tprobe: command-line driver. Exit codes: 0 success, 1 invalid input,
// 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tprobe/common.h"
#include "tprobe/config.h"
#include "tprobe/corpus.h"
#include "tprobe/count_model.h"
#include "tprobe/date_formats.h"
#include "tprobe/diagnostics.h"
#include "tprobe/evaluator.h"
#include "tprobe/experiments.h"
#include "tprobe/external_model.h"
#include "tprobe/fact_store.h"
#include "tprobe/report.h"
#include "tprobe/sampling.h"
#include "tprobe/synthetic.h"
#include "tprobe/tagger.h"
#include "tprobe/templama.h"

namespace tprobe {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string data_dir;
  bool quiet = false;
};

RunConfig LoadConfig(const Globals &g) {
  RunConfig config = g.config_path.empty() ? RunConfig{} : RunConfig::Load(g.config_path);
  for (const std::string &kv : g.overrides) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set wants key=value, got '" + kv + "'");
    config.Set(std::string(Trim(kv.substr(0, eq))), std::string(Trim(kv.substr(eq + 1))));
  }
  config.Validate();
  return config;
}

void BuildTemplamaCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("build-templama", "Build cloze queries from a fact store");
  static std::string facts, templates, period = "2010:2020", split = "0.2,0.1,0.7", out;
  static size_t top_k = 1000;
  static uint64_t seed = 0;
  cmd->add_option("--facts", facts, "Facts file (.tsv or .jsonl)")->required();
  cmd->add_option("--templates", templates, "Templates TSV (default: shipped)");
  cmd->add_option("--period", period, "Year range A:B");
  cmd->add_option("--top-k", top_k, "Subjects kept per relation");
  cmd->add_option("--split", split, "train,validation,test fractions");
  cmd->add_option("--seed", seed, "Split seed");
  cmd->add_option("--out", out, "Output directory")->required();
  cmd->callback([&g] {
    (void)g;
    YearRange range = YearRange::Parse(period);
    FilterCounts counts;
    FactStore store = FilterTemporal(LoadFacts(facts, range), range.first, &counts);
    TemplamaOptions options{top_k, SplitFractions::Parse(split), seed};
    TemplamaBuild build = BuildTemplama(
        store, LoadTemplates(templates.empty() ? DataPath("templates.tsv") : templates), options);
    WriteReportFile(out, "queries.jsonl", QueriesToJsonl(build.queries));
    WriteReportFile(out, "train.jsonl", QueriesToJsonl(build.split.train));
    WriteReportFile(out, "validation.jsonl", QueriesToJsonl(build.split.validation));
    WriteReportFile(out, "test.jsonl", QueriesToJsonl(build.split.test));
    std::map<int, size_t> per_year;
    for (const ClozeQuery &q : build.queries) ++per_year[q.year];
    nlohmann::ordered_json stats;
    stats["facts_kept"] = counts.kept;
    stats["facts_dropped"] = counts.dropped;
    stats["pairs"] = build.pairs.size();
    stats["queries"] = build.queries.size();
    for (const auto &[y, n] : per_year) stats["per_year"][std::to_string(y)] = n;
    stats["train"] = build.split.train.size();
    stats["validation"] = build.split.validation.size();
    stats["test"] = build.split.test.size();
    WriteReportFile(out, "stats.json", stats.dump(2) + "\n");
    std::cout << build.queries.size() << " queries across " << per_year.size() << " years\n";
  });
}

void BuildCorpusCommand(CLI::App &app) {
  auto *cmd = app.add_subcommand("build-corpus", "Mask salient spans in timestamped documents");
  static std::string in, tagger, policy = "one-per-span", period = "2010:2020", out;
  static uint64_t seed = 0;
  cmd->add_option("--in", in, "Documents JSONL")->required();
  cmd->add_option("--tagger", tagger, "builtin:gazetteer=FILE or cmd:COMMAND")->required();
  cmd->add_option("--policy", policy, "one-per-span or random-one");
  cmd->add_option("--period", period, "Valid document years");
  cmd->add_option("--seed", seed, "Masking seed");
  cmd->add_option("--out", out, "Output directory")->required();
  cmd->callback([] {
    std::unique_ptr<EntityTagger> t = MakeTagger(tagger);
    CorpusOptions options{ParseMaskPolicy(policy), seed};
    CorpusStats stats;
    std::vector<MaskedExample> examples =
        BuildCorpus(LoadDocs(in, YearRange::Parse(period)), *t, options, &stats);
    WriteReportFile(out, "examples.jsonl", ExamplesToJsonl(examples));
    nlohmann::ordered_json j{{"docs", stats.docs},
                             {"sentences", stats.sentences},
                             {"spans", stats.spans},
                             {"examples", stats.examples},
                             {"skipped_sentences", stats.skipped_sentences},
                             {"explicit_year_sentences", stats.explicit_year_sentences},
                             {"same_year_sentences", stats.same_year_sentences}};
    WriteReportFile(out, "stats.json", j.dump(2) + "\n");
    std::cout << stats.examples << " examples from " << stats.docs << " documents\n";
  });
}

void TrainCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("train", "Train a count model on masked examples");
  static std::string examples, probes, years, regime, out;
  static size_t steps = 0;
  cmd->add_option("--examples", examples, "Masked examples JSONL")->required();
  cmd->add_option("--probes", probes, "Train-split queries JSONL mixed into the stream");
  cmd->add_option("--regime", regime, "uniform, yearly or temporal (default: config)");
  cmd->add_option("--years", years, "Training years (default: config train_years)");
  cmd->add_option("--steps", steps, "Examples to consume (default: config steps)");
  cmd->add_option("--out", out, "Model file")->required();
  cmd->callback([&g] {
    RunConfig config = LoadConfig(g);
    if (!regime.empty()) config.regime = ParseRegime(regime);
    YearRange range = years.empty() ? config.train_years : YearRange::Parse(years);
    ExperimentData data;
    data.corpus = LoadExamples(examples);
    if (!probes.empty()) data.split.train = LoadQueries(probes);
    TemporalCountModel model =
        TrainRegime(config, data, config.regime, range, steps ? steps : config.steps);
    model.Save(out);
    std::cout << "trained " << RegimeName(config.regime) << " on " << model.steps()
              << " examples, vocab " << model.vocab_size() << "\n";
  });
}

void EvalCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("eval", "Score a model on cloze queries");
  static std::string model_spec, queries, report_dir, style;
  cmd->add_option("--model", model_spec, "count:PATH, cmd:COMMAND or a model file")->required();
  cmd->add_option("--queries", queries, "Queries JSONL")->required();
  cmd->add_option("--report", report_dir, "Report directory")->required();
  cmd->add_option("--style", style, "plain, time-prefix or in-year");
  cmd->callback([&g] {
    RunConfig config = LoadConfig(g);
    if (!style.empty()) config.input_style = ParseInputStyle(style);
    std::unique_ptr<Model> model = LoadModel(model_spec);
    std::vector<ClozeQuery> qs = LoadQueries(queries);
    EvalOptions options = EvalOptionsFor(config);
    F1Result f1 = EvaluateF1(*model, qs, options);
    std::map<int, BucketStat> buckets =
        DurationBuckets(f1, qs, config.duration_cap, config.bootstrap_resamples,
                        DeriveSeed(config.seed, "bootstrap"));
    nlohmann::ordered_json j = F1Json(f1);
    j["durations"] = BucketsJson(buckets);
    WriteReportFile(report_dir, "report.json", j.dump(2) + "\n");
    WriteReportFile(report_dir, "f1_by_year.csv", F1ByYearCsv({{"model", &f1}}));
    WriteReportFile(report_dir, "duration_f1.csv",
                    DurationCsv({{"model", buckets}}, config.duration_cap));
    std::cout << "macro F1 " << Num(f1.macro) << " over " << f1.per_query.size()
              << " queries, " << f1.failures << " failures\n";
  });
}

void CalibrateCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("calibrate", "Closed-set entropy of future probes");
  static std::string model_spec, probes, candidates, years = "2019:2029", report_dir;
  cmd->add_option("--model", model_spec, "Model spec")->required();
  cmd->add_option("--probes", probes, "Future probes TSV (default: shipped)");
  cmd->add_option("--candidates", candidates, "cities or countries (default: each probe's own)");
  cmd->add_option("--years", years, "Probe years");
  cmd->add_option("--report", report_dir, "Report directory (default: CSV to stdout)");
  cmd->callback([&g] {
    RunConfig config = LoadConfig(g);
    std::unique_ptr<Model> model = LoadModel(model_spec);
    std::vector<FutureProbe> ps =
        LoadFutureProbes(probes.empty() ? DataPath("future_relations.tsv") : probes);
    std::map<AnswerDomain, std::vector<std::string>> sets;
    if (candidates.empty()) {
      for (AnswerDomain d : {AnswerDomain::kCities, AnswerDomain::kCountries}) {
        sets[d] = LoadCandidates(d);
      }
    } else {
      AnswerDomain d = ParseDomain(candidates);
      sets[d] = LoadCandidates(d);
    }
    EntropyCurve curve = CalibrationCurve(*model, ps, sets, YearRange::Parse(years).Years(),
                                          config.input_style);
    std::string csv = EntropyCsv({{"model", curve}});
    if (report_dir.empty()) {
      std::cout << csv;
    } else {
      WriteReportFile(report_dir, "entropy_curve.csv", csv);
      WriteReportFile(report_dir, "report.json",
                      nlohmann::ordered_json{{"entropy_unit", "nats"},
                                             {"curve", EntropyJson(curve)}}
                              .dump(2) +
                          "\n");
    }
  });
}

void DiagFutureCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("diag-future", "Entropy curves for the future-relations set");
  static std::string model_spec, probes, years = "2019:2029";
  cmd->add_option("--model", model_spec, "Model spec")->required();
  cmd->add_option("--probes", probes, "Future probes TSV (default: shipped)");
  cmd->add_option("--years", years, "Probe years");
  cmd->callback([&g] {
    RunConfig config = LoadConfig(g);
    std::unique_ptr<Model> model = LoadModel(model_spec);
    std::vector<FutureProbe> ps =
        LoadFutureProbes(probes.empty() ? DataPath("future_relations.tsv") : probes);
    std::map<AnswerDomain, std::vector<std::string>> sets = {
        {AnswerDomain::kCities, LoadCandidates(AnswerDomain::kCities)},
        {AnswerDomain::kCountries, LoadCandidates(AnswerDomain::kCountries)}};
    EntropyCurve curve = CalibrationCurve(*model, ps, sets, YearRange::Parse(years).Years(),
                                          config.input_style);
    std::cout << EntropyCsv({{"model", curve}});
  });
}

void DiagDatesCommand(CLI::App &app) {
  auto *cmd = app.add_subcommand("diag-dates", "Generate or score date-comparison pairs");
  static size_t count = 10000;
  static std::string years = "1980:2030", out, formats, model_spec, pairs_in;
  static uint64_t seed = 0;
  static bool include_ambiguous = false;
  cmd->add_option("--count", count, "Pairs to generate");
  cmd->add_option("--years", years, "Year range");
  cmd->add_option("--seed", seed, "Generation seed");
  cmd->add_option("--formats", formats, "Comma-separated format ids (default: all 24)");
  cmd->add_option("--out", out, "Write pairs JSONL here");
  cmd->add_option("--pairs", pairs_in, "Score these pairs instead of generating");
  cmd->add_option("--model", model_spec, "Score the pairs with this model");
  cmd->add_flag("--include-ambiguous", include_ambiguous, "Score ambiguous pairs apart");
  cmd->callback([] {
    std::vector<DatePair> pairs;
    if (!pairs_in.empty()) {
      pairs = ParseDatePairsJsonl(ReadFile(pairs_in), pairs_in);
    } else {
      std::vector<const DateFormat *> fs = AllFormats();
      if (!formats.empty()) {
        fs.clear();
        for (const std::string &id : Split(formats, ',')) {
          fs.push_back(&FindDateFormat(std::string(Trim(id))));
        }
      }
      pairs = GenDatePairs(count, YearRange::Parse(years), fs, seed);
    }
    if (!out.empty()) WriteFile(out, DatePairsToJsonl(pairs));
    size_t ambiguous = 0;
    for (const DatePair &p : pairs) ambiguous += p.ambiguous;
    std::cerr << pairs.size() << " pairs, " << ambiguous << " ambiguous\n";
    if (!model_spec.empty()) {
      std::unique_ptr<Model> model = LoadModel(model_spec);
      std::cout << DateReportJson(EvalDateComparison(*model, pairs, include_ambiguous)).dump(2)
                << "\n";
    } else if (out.empty()) {
      std::cout << DatePairsToJsonl(pairs);
    }
  });
}

void FlowCommand(CLI::App &app, Globals &g, const std::string &name, const std::string &help,
                 const std::string &fixed_flow) {
  auto *cmd = app.add_subcommand(name, help);
  auto flow = std::make_shared<std::string>(fixed_flow);
  auto out = std::make_shared<std::string>();
  if (fixed_flow.empty()) {
    cmd->add_option("--flow", *flow, "memorize, degrade, calibrate, adapt or diagnose")
        ->required();
  }
  cmd->add_option("--out", *out, "Report directory")->required();
  cmd->callback([&g, flow, out] {
    RunConfig config = LoadConfig(g);
    RunExperiment(config, *flow, *out);
    std::cout << "wrote " << *flow << " reports to " << *out << "\n";
  });
}

void GenWorldCommand(CLI::App &app, Globals &g) {
  auto *cmd = app.add_subcommand("gen-world", "Write the seeded drift world to files");
  static std::string out;
  cmd->add_option("--out", out, "Output directory")->required();
  cmd->callback([&g] {
    RunConfig config = LoadConfig(g);
    DriftWorldOptions options;
    options.changing_subjects = config.world_subjects;
    options.control_subjects = config.world_controls;
    options.min_period = config.world_min_period;
    options.max_period = config.world_max_period;
    options.period = config.period;
    options.objects_per_relation = config.world_objects;
    options.docs_per_year = config.world_docs_per_year;
    options.seed = DeriveSeed(config.seed, "world");
    DriftWorld world = BuildDriftWorld(options);
    WriteReportFile(out, "facts.tsv", SerializeFacts(world.Store()));
    WriteReportFile(out, "docs.jsonl", DocsToJsonl(world.docs));
    WriteReportFile(out, "queries.jsonl", QueriesToJsonl(world.queries));
    WriteReportFile(out, "entities.txt", Join(world.entity_names, "\n") + "\n");
    std::cout << world.facts.size() << " facts, " << world.docs.size() << " documents, "
              << world.queries.size() << " queries\n";
  });
}

void ServeCommands(CLI::App &app) {
  auto *model_cmd = app.add_subcommand("serve-model", "Answer model requests on stdin/stdout");
  static std::string model_spec, gazetteer;
  model_cmd->add_option("--model", model_spec, "Model spec")->required();
  model_cmd->callback([] {
    std::unique_ptr<Model> model = LoadModel(model_spec);
    ServeModel(*model, std::cin, std::cout);
  });
  auto *tagger_cmd = app.add_subcommand("serve-tagger", "Answer tagger requests on stdin/stdout");
  tagger_cmd->add_option("--gazetteer", gazetteer, "Newline-delimited entity names")->required();
  tagger_cmd->callback([] {
    std::unique_ptr<GazetteerTagger> tagger = GazetteerTagger::FromFile(gazetteer, true);
    ServeTagger(*tagger, std::cin, std::cout);
  });
}

int Main(int argc, char **argv) {
  CLI::App app{"tprobe: temporal knowledge probes for masked language models"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "Override a config key (key=value), repeatable");
  app.add_option("--data-dir", g.data_dir, "Data directory (default: $TPROBE_DATA_DIR)");
  app.add_flag("--quiet", g.quiet, "Silence warnings");
  app.parse_complete_callback([&g] {
    if (!g.data_dir.empty()) setenv("TPROBE_DATA_DIR", g.data_dir.c_str(), 1);
    SetWarningsSilenced(g.quiet);
  });

  BuildTemplamaCommand(app, g);
  BuildCorpusCommand(app);
  TrainCommand(app, g);
  EvalCommand(app, g);
  CalibrateCommand(app, g);
  FlowCommand(app, g, "adapt", "Run the adaptation flow", "adapt");
  DiagDatesCommand(app);
  DiagFutureCommand(app, g);
  FlowCommand(app, g, "report", "Run one experiment flow end to end", "");
  GenWorldCommand(app, g);
  ServeCommands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace tprobe

int main(int argc, char **argv) { return tprobe::Main(argc, argv); }
