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

#include "tprobe/experiments.h"

#include <algorithm>
#include <filesystem>

#include "json.hpp"
#include "tprobe/date_formats.h"
#include "tprobe/fact_store.h"
#include "tprobe/report.h"
#include "tprobe/sampling.h"
#include "tprobe/synthetic.h"
#include "tprobe/tagger.h"

namespace tprobe {

using nlohmann::ordered_json;

namespace {

std::vector<MaskedExample> ExamplesInYears(const std::vector<MaskedExample> &examples,
                                           const YearRange &years) {
  std::vector<MaskedExample> out;
  for (const MaskedExample &e : examples) {
    if (years.Contains(e.year)) out.push_back(e);
  }
  return out;
}

std::string FileHash(const std::string &path) { return HexId(StableHash(ReadFile(path))); }

std::string AlphaLabel(double alpha) { return FormatShortest(alpha); }

}  // namespace

ExperimentData PrepareData(const RunConfig &config) {
  config.Validate();
  ExperimentData data;
  const uint64_t seed = config.seed;
  if (config.facts.empty()) {
    DriftWorldOptions options;
    options.changing_subjects = config.world_subjects;
    options.control_subjects = config.world_controls;
    options.min_period = config.world_min_period;
    options.max_period = config.world_max_period;
    options.period = config.period;
    options.objects_per_relation = config.world_objects;
    options.docs_per_year = config.world_docs_per_year;
    options.seed = DeriveSeed(seed, "world");
    DriftWorld world = BuildDriftWorld(options);
    data.synthetic = true;
    data.corpus = DriftWorldCorpus(world, MaskPolicy::kOnePerSpan, DeriveSeed(seed, "corpus"),
                                   &data.corpus_stats);
    data.queries = world.queries;
    data.split = SplitBySubject(data.queries, config.split, DeriveSeed(seed, "split"));
    data.candidates = world.object_names;
    std::map<std::string, const RelationTemplate *> by_relation;
    for (const RelationTemplate &t : world.templates) by_relation[t.relation_id()] = &t;
    for (const WorldSubject &s : world.subjects) {
      data.probes.push_back({by_relation.at(s.relation_id)->Render(s.name), s.category});
    }
    data.inputs["templates"] = DataPath("templates.tsv");
    return data;
  }

  data.synthetic = false;
  FactStore store = FilterTemporal(LoadFacts(config.facts, config.period), config.period.first);
  std::string templates_path =
      config.templates.empty() ? DataPath("templates.tsv") : config.templates;
  TemplamaOptions options;
  options.top_k = config.top_k;
  options.fractions = config.split;
  options.seed = DeriveSeed(seed, "split");
  TemplamaBuild build = BuildTemplama(store, LoadTemplates(templates_path), options);
  data.queries = build.queries;
  data.split = build.split;
  std::set<std::string> objects, names;
  for (const TemporalFact &f : store.facts()) {
    objects.insert(f.object_name);
    names.insert(f.object_name);
    names.insert(f.subject_name);
  }
  data.candidates.assign(objects.begin(), objects.end());
  std::unique_ptr<EntityTagger> tagger;
  if (config.tagger.empty()) {
    tagger = std::make_unique<GazetteerTagger>(
        std::vector<std::string>(names.begin(), names.end()), true);
  } else {
    tagger = MakeTagger(config.tagger);
  }
  CorpusOptions corpus_options;
  corpus_options.seed = DeriveSeed(seed, "corpus");
  data.corpus = BuildCorpus(LoadDocs(config.docs, config.period), *tagger, corpus_options,
                            &data.corpus_stats);
  if (data.corpus.empty()) throw ValidationError("the corpus produced no masked examples");
  data.inputs["facts"] = config.facts;
  data.inputs["docs"] = config.docs;
  data.inputs["templates"] = templates_path;
  return data;
}

std::set<SubjectRelation> MultiAnswerPairs(const std::vector<ClozeQuery> &queries) {
  std::map<SubjectRelation, std::set<std::string>> answers;
  for (const ClozeQuery &q : queries) {
    answers[{q.subject_id, q.relation_id}].insert(q.answers.begin(), q.answers.end());
  }
  std::set<SubjectRelation> out;
  for (const auto &[pair, set] : answers) {
    if (set.size() > 1) out.insert(pair);
  }
  return out;
}

F1Result SubsetF1(const F1Result &result, const std::set<std::string> &ids,
                  const EvalOptions &options) {
  F1Result out;
  for (const QueryF1 &q : result.per_query) {
    if (!ids.count(q.id)) continue;
    out.per_query.push_back(q);
    if (!q.error.empty()) ++out.failures;
  }
  if (!out.per_query.empty()) Aggregate(out, options.seen, options.future);
  return out;
}

EvalOptions EvalOptionsFor(const RunConfig &config) {
  EvalOptions options;
  options.seen = config.train_years;
  options.future = config.future_years;
  options.style = config.input_style;
  return options;
}

TemporalCountModel TrainRegime(const RunConfig &config, const ExperimentData &data,
                               Regime regime, const YearRange &years, size_t steps) {
  ModelRegime model_regime{regime, {}};
  if (regime == Regime::kYearly) model_regime.expert_years = years.Years();
  CountModelOptions options;
  options.smoothing_k = config.smoothing_k;
  options.lambda = config.lambda;
  TemporalCountModel model(model_regime, options);

  const std::string label = "train/" + std::string(RegimeName(regime)) + "/" + years.ToString();
  std::vector<MaskedExample> corpus = ExamplesInYears(data.corpus, years);
  if (corpus.empty()) throw ValidationError("no corpus examples in " + years.ToString());
  SampledStream corpus_stream(corpus, SampleMode::UniformByYear(),
                              DeriveSeed(config.seed, label + "/corpus"));
  std::vector<MaskedExample> probes =
      QueriesToExamples(QueriesInYears(data.split.train, years));
  if (probes.empty()) {
    model.Train(corpus_stream, steps);
    return model;
  }
  SampledStream probe_stream(probes, SampleMode::UniformByYear(),
                             DeriveSeed(config.seed, label + "/probes"));
  MixedStream mixed(corpus_stream, probe_stream, config.mix_corpus, config.mix_probe);
  if (regime == Regime::kTemporal) {
    TimePrefixStream prefixed(mixed);
    model.Train(prefixed, steps);
  } else {
    model.Train(mixed, steps);
  }
  return model;
}

MemorizeResult RunMemorize(const RunConfig &config, const ExperimentData &data) {
  MemorizeResult result;
  const EvalOptions eval = EvalOptionsFor(config);
  const std::vector<ClozeQuery> &test = data.split.test;
  if (test.empty()) throw ValidationError("the test split is empty");
  std::set<SubjectRelation> multi = MultiAnswerPairs(data.queries);
  std::set<std::string> multi_ids, single_ids;
  for (const ClozeQuery &q : test) {
    (multi.count({q.subject_id, q.relation_id}) ? multi_ids : single_ids).insert(q.id);
  }
  const uint64_t boot = DeriveSeed(config.seed, "bootstrap");
  for (Regime regime : {Regime::kUniform, Regime::kYearly, Regime::kTemporal}) {
    std::string name(RegimeName(regime));
    TemporalCountModel model = TrainRegime(config, data, regime, config.train_years, config.steps);
    F1Result f1 = EvaluateF1(model, test, eval);
    for (const auto &[group, ids] : {std::pair<const char *, const std::set<std::string> *>{
                                         "multiple", &multi_ids},
                                     {"single", &single_ids}}) {
      F1Result sub = SubsetF1(f1, *ids, eval);
      if (!sub.per_query.empty()) result.group_macro[name][group] = sub.macro;
    }
    result.durations[name] =
        DurationBuckets(f1, test, config.duration_cap, config.bootstrap_resamples, boot);
    if (regime == Regime::kYearly) {
      std::vector<TemporalCountModel> experts;
      std::vector<int> years = model.ExpertYears();
      experts.reserve(years.size());
      for (int y : years) experts.push_back(model.Expert(y));
      std::map<int, const Model *> expert_ptrs;
      std::map<int, std::vector<ClozeQuery>> test_sets;
      for (size_t i = 0; i < years.size(); ++i) {
        expert_ptrs[years[i]] = &experts[i];
        test_sets[years[i]] = QueriesInYears(test, {years[i], years[i]});
      }
      if (expert_ptrs.size() >= 2) {
        result.gap = ComputeGapCurve(expert_ptrs, test_sets, eval, config.bootstrap_resamples,
                                     boot);
      }
    }
    result.f1[name] = std::move(f1);
  }
  return result;
}

DegradeResult RunDegrade(const RunConfig &config, const ExperimentData &data) {
  DegradeResult result;
  const int anchor = config.train_years.last;
  for (Regime regime : {Regime::kUniform, Regime::kYearly, Regime::kTemporal}) {
    std::string name(RegimeName(regime));
    TemporalCountModel model = TrainRegime(config, data, regime, config.train_years, config.steps);
    std::vector<AnchorQuery> anchors =
        SelectAnchorQueries(model, data.split.test, anchor, config.input_style);
    result.anchors[name] = anchors.size();
    result.loglik[name] =
        FutureLoglikCurve(model, anchors, anchor, config.horizon, config.input_style);
    std::map<int, std::vector<SpanScore>> scores;
    for (const MaskedExample &e : data.corpus) {
      scores[e.year].push_back(model.Score(e.input, e.year, e.target));
    }
    for (const auto &[year, s] : scores) result.perplexity[name][year] = MlmPerplexity(s);
  }
  return result;
}

EntropyCurve ProbeEntropyCurve(const Model &model, const std::vector<CategorizedProbe> &probes,
                               const std::vector<std::string> &candidates,
                               const std::vector<int> &years, InputStyle style) {
  std::map<std::string, std::map<int, std::pair<double, size_t>>> sums;
  for (const CategorizedProbe &p : probes) {
    for (const auto &[year, h] : ClosedSetEntropy(model, p.text, candidates, years, style)) {
      auto &[sum, n] = sums[std::string(CategoryName(p.category))][year];
      sum += h;
      ++n;
    }
  }
  EntropyCurve curve;
  for (const auto &[category, by_year] : sums) {
    for (const auto &[year, acc] : by_year) {
      curve[category].emplace_back(year, acc.first / static_cast<double>(acc.second));
    }
  }
  return curve;
}

CalibrateResult RunCalibrate(const RunConfig &config, const ExperimentData &data) {
  CalibrateResult result;
  std::vector<int> years = config.calib_years.Years();
  std::string probes_path =
      config.future_probes.empty() ? DataPath("future_relations.tsv") : config.future_probes;
  std::vector<FutureProbe> future = LoadFutureProbes(probes_path);
  std::map<AnswerDomain, std::vector<std::string>> domains = {
      {AnswerDomain::kCities, LoadCandidates(AnswerDomain::kCities)},
      {AnswerDomain::kCountries, LoadCandidates(AnswerDomain::kCountries)}};
  for (Regime regime : {Regime::kUniform, Regime::kTemporal}) {
    std::string name(RegimeName(regime));
    TemporalCountModel model = TrainRegime(config, data, regime, config.train_years, config.steps);
    if (!data.probes.empty()) {
      result.curves.emplace_back(
          name + "/world",
          ProbeEntropyCurve(model, data.probes, data.candidates, years, config.input_style));
    }
    result.curves.emplace_back(name + "/future-relations",
                               CalibrationCurve(model, future, domains, years, config.input_style));
  }
  return result;
}

AdaptResult RunAdapt(const RunConfig &config, const ExperimentData &data) {
  AdaptResult result;
  const EvalOptions eval = EvalOptionsFor(config);
  result.continuation_steps = config.ContinuationSteps();
  result.decay = config.adapt_forgetting / static_cast<double>(result.continuation_steps);
  MixtureSpec spec;
  for (int y : config.adapt_new_slice.Years()) spec.new_slice.insert(y);
  for (int y : config.train_years.Years()) spec.old_slices.insert(y);
  std::vector<ClozeQuery> old_test = QueriesInYears(data.split.test, config.train_years);
  std::vector<ClozeQuery> new_test = QueriesInYears(data.split.test, config.adapt_new_slice);
  if (old_test.empty() || new_test.empty()) {
    throw ValidationError("adapt needs test queries in both the old and the new slice");
  }
  std::vector<MaskedExample> pool;
  for (const MaskedExample &e : data.corpus) {
    if (spec.new_slice.count(e.year) || spec.old_slices.count(e.year)) pool.push_back(e);
  }
  for (Regime regime : {Regime::kUniform, Regime::kTemporal}) {
    std::string name(RegimeName(regime));
    TemporalCountModel base = TrainRegime(config, data, regime, config.train_years, config.steps);
    const double base_old = EvaluateF1(base, old_test, eval).macro;
    const double base_new = EvaluateF1(base, new_test, eval).macro;
    for (double alpha : config.alpha_grid) {
      spec.alpha = alpha;
      TemporalCountModel model = base;
      model.set_recency_decay(result.decay);
      SampledStream stream(pool, SampleMode::Mixture(spec),
                           DeriveSeed(config.seed, "adapt/" + name + "/" + AlphaLabel(alpha)));
      size_t from_new = 0;
      for (size_t i = 0; i < result.continuation_steps; ++i) {
        std::optional<MaskedExample> e = stream.Next();
        if (!e) break;
        if (stream.last_from_new()) ++from_new;
        model.Observe(regime == Regime::kTemporal ? ApplyTimePrefix(std::move(*e)) : *e);
      }
      AdaptRow row;
      row.regime = name;
      row.alpha = alpha;
      row.base_old_f1 = base_old;
      row.base_new_f1 = base_new;
      row.old_f1 = EvaluateF1(model, old_test, eval).macro;
      row.new_f1 = EvaluateF1(model, new_test, eval).macro;
      row.new_fraction =
          static_cast<double>(from_new) / static_cast<double>(result.continuation_steps);
      result.rows.push_back(row);
    }
  }
  return result;
}

DiagnoseResult RunDiagnose(const RunConfig &config) {
  DiagnoseResult result;
  std::vector<const DateFormat *> coarse;
  for (const std::string &id : config.date_coarse_formats) {
    coarse.push_back(&FindDateFormat(id));
  }
  std::vector<const DateFormat *> all = AllFormats();
  CountModelOptions options;
  options.smoothing_k = config.smoothing_k;
  options.lambda = config.lambda;

  auto train = [&](const std::vector<const DateFormat *> &formats, const std::string &label) {
    TemporalCountModel model({Regime::kTemporal, {}}, options);
    VectorStream stream(DatePairsToExamples(
        GenDatePairs(config.date_train_pairs, config.date_years, formats,
                     DeriveSeed(config.seed, "dates/train/" + label))));
    model.Train(stream, config.date_train_pairs);
    return model;
  };

  TemporalCountModel coarse_model = train(coarse, "coarse");
  result.coarse = EvalDateComparison(
      coarse_model, GenDatePairs(config.date_pairs, config.date_years, coarse,
                                 DeriveSeed(config.seed, "dates/eval/coarse")));
  TemporalCountModel all_model = train(all, "all");
  result.eval_pairs = GenDatePairs(config.date_pairs, config.date_years, all,
                                   DeriveSeed(config.seed, "dates/eval/all"));
  result.all_formats = EvalDateComparison(all_model, result.eval_pairs);
  result.coarse_ambiguous = EvalDateComparison(all_model, result.eval_pairs, true);
  return result;
}

std::string ManifestJson(const RunConfig &config, const std::string &flow,
                         const std::map<std::string, std::string> &inputs) {
  ordered_json j;
  j["tool"] = "tprobe";
  j["version"] = std::string(kVersion);
  j["flow"] = flow;
  j["seed"] = config.seed;
  j["config"] = config.Serialize();
  ordered_json files = ordered_json::array();
  for (const auto &[role, path] : inputs) {
    files.push_back({{"role", role}, {"path", path}, {"fnv1a64", FileHash(path)}});
  }
  j["inputs"] = files;
  return j.dump(2) + "\n";
}

void RunExperiment(const RunConfig &config, const std::string &flow, const std::string &out_dir) {
  if (std::find(FlowNames().begin(), FlowNames().end(), flow) == FlowNames().end()) {
    throw ValidationError("unknown flow '" + flow + "' (want " + Join(FlowNames(), ", ") + ")");
  }
  config.Validate();
  ordered_json report;
  report["flow"] = flow;
  report["entropy_unit"] = "nats";
  std::map<std::string, std::string> inputs;

  if (flow == "diagnose") {
    for (const char *f : {"date_formats.tsv"}) inputs[f] = DataPath(f);
    DiagnoseResult r = RunDiagnose(config);
    report["coarse"] = DateReportJson(r.coarse);
    report["all_formats"] = DateReportJson(r.all_formats);
    report["all_formats_with_ambiguous"] = DateReportJson(r.coarse_ambiguous);
    WriteReportFile(out_dir, "date_accuracy.csv",
                    DateAccuracyCsv({{"coarse", r.coarse},
                                     {"all_formats", r.all_formats},
                                     {"all_formats_with_ambiguous", r.coarse_ambiguous}}));
    WriteReportFile(out_dir, "date_pairs.jsonl", DatePairsToJsonl(r.eval_pairs));
  } else {
    ExperimentData data = PrepareData(config);
    inputs = data.inputs;
    report["data"] = {{"synthetic", data.synthetic},
                      {"examples", data.corpus.size()},
                      {"queries", data.queries.size()},
                      {"train_queries", data.split.train.size()},
                      {"validation_queries", data.split.validation.size()},
                      {"test_queries", data.split.test.size()},
                      {"explicit_year_sentences", data.corpus_stats.explicit_year_sentences},
                      {"sentences", data.corpus_stats.sentences}};
    if (flow == "memorize") {
      MemorizeResult r = RunMemorize(config, data);
      std::vector<std::pair<std::string, const F1Result *>> rows;
      std::vector<std::pair<std::string, std::map<int, BucketStat>>> buckets;
      ordered_json models = ordered_json::object();
      for (const auto &[name, f1] : r.f1) {
        rows.emplace_back(name, &f1);
        buckets.emplace_back(name, r.durations.at(name));
        ordered_json m = F1Json(f1);
        for (const auto &[group, macro] : r.group_macro[name]) m[group + "_macro"] = macro;
        m["durations"] = BucketsJson(r.durations.at(name));
        models[name] = m;
      }
      report["models"] = models;
      report["gap_curve"] = GapJson(r.gap);
      WriteReportFile(out_dir, "f1_by_year.csv", F1ByYearCsv(rows));
      WriteReportFile(out_dir, "gap_curve.csv", GapCurveCsv(r.gap));
      WriteReportFile(out_dir, "duration_f1.csv", DurationCsv(buckets, config.duration_cap));
    } else if (flow == "degrade") {
      DegradeResult r = RunDegrade(config, data);
      std::vector<std::pair<std::string, std::map<std::string, std::vector<LoglikPoint>>>> curves(
          r.loglik.begin(), r.loglik.end());
      ordered_json models = ordered_json::object();
      std::string ppl = "model,year,perplexity\n";
      for (const auto &[name, curve] : r.loglik) {
        ordered_json p = ordered_json::object();
        for (const auto &[year, v] : r.perplexity[name]) {
          p[std::to_string(year)] = std::strtod(Num(v).c_str(), nullptr);
          ppl += name + "," + std::to_string(year) + "," + Num(v) + "\n";
        }
        models[name] = {{"anchor_queries", r.anchors[name]},
                        {"future_loglik", LoglikJson(curve)},
                        {"perplexity", p}};
      }
      report["anchor_year"] = config.train_years.last;
      report["models"] = models;
      WriteReportFile(out_dir, "future_loglik.csv", FutureLoglikCsv(curves));
      WriteReportFile(out_dir, "perplexity.csv", ppl);
    } else if (flow == "calibrate") {
      CalibrateResult r = RunCalibrate(config, data);
      inputs["future_probes"] =
          config.future_probes.empty() ? DataPath("future_relations.tsv") : config.future_probes;
      inputs["cities"] = DataPath("us_cities_200.txt");
      inputs["countries"] = DataPath("countries_249.txt");
      ordered_json curves = ordered_json::object();
      for (const auto &[name, curve] : r.curves) curves[name] = EntropyJson(curve);
      report["curves"] = curves;
      WriteReportFile(out_dir, "entropy_curve.csv", EntropyCsv(r.curves));
    } else {
      AdaptResult r = RunAdapt(config, data);
      std::string csv = "regime,alpha,old_f1,new_f1,base_old_f1,base_new_f1,new_fraction\n";
      ordered_json rows = ordered_json::array();
      for (const AdaptRow &row : r.rows) {
        csv += row.regime + "," + AlphaLabel(row.alpha) + "," + Num(row.old_f1) + "," +
               Num(row.new_f1) + "," + Num(row.base_old_f1) + "," + Num(row.base_new_f1) + "," +
               Num(row.new_fraction) + "\n";
        rows.push_back({{"regime", row.regime},
                        {"alpha", row.alpha},
                        {"old_f1", std::strtod(Num(row.old_f1).c_str(), nullptr)},
                        {"new_f1", std::strtod(Num(row.new_f1).c_str(), nullptr)},
                        {"new_fraction", std::strtod(Num(row.new_fraction).c_str(), nullptr)}});
      }
      report["continuation_steps"] = r.continuation_steps;
      report["recency_decay"] = std::strtod(Num(r.decay).c_str(), nullptr);
      report["rows"] = rows;
      WriteReportFile(out_dir, "adapt.csv", csv);
    }
  }
  WriteReportFile(out_dir, "report.json", report.dump(2) + "\n");
  WriteReportFile(out_dir, "config.txt", config.Serialize());
  WriteReportFile(out_dir, "manifest.json", ManifestJson(config, flow, inputs));
}

}  // namespace tprobe
