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
#include <set>

#include "doctest.h"
#include "oracles.h"
#include "tprobe/count_model.h"
#include "tprobe/common.h"
#include "tprobe/date_formats.h"
#include "tprobe/diagnostics.h"

namespace tprobe {
namespace {

TEST_CASE("calendar arithmetic") {
  CHECK(Date{1970, 1, 1}.DayNumber() == 0);
  CHECK(Date{2000, 3, 1}.DayNumber() == 11017);
  CHECK(Date{2019, 10, 15}.Weekday() == 1);  // a Tuesday
  CHECK(DaysInMonth(2020, 2) == 29);
  CHECK(DaysInMonth(1900, 2) == 28);
  CHECK_FALSE((Date{2019, 2, 29}.Valid()));
  for (long d = -1000; d < 30000; d += 7) CHECK(Date::FromDayNumber(d).DayNumber() == d);
  CHECK(Date{2014, 3, 9}.ToIso() == "2014-03-09");
}

TEST_CASE("registry has 24 formats with consistent specificity") {
  const std::vector<DateFormat> &formats = DefaultDateFormats();
  CHECK(formats.size() == 24);
  std::set<std::string> ids;
  for (const DateFormat &f : formats) {
    ids.insert(f.id());
    int fields = f.has_year() + f.has_month() + f.has_day() + f.has_weekday();
    CHECK(fields == f.specificity());
  }
  CHECK(ids.size() == 24);
  CHECK_THROWS_AS(DateFormat("bad", "{bogus}", 1), ValidationError);
  CHECK_THROWS_AS(DateFormat("bad", "{year}", 2), ValidationError);
}

TEST_CASE("property: every format round-trips its encoded fields") {
  testing::Gen gen(31);
  for (const DateFormat &f : DefaultDateFormats()) {
    for (int i = 0; i < 200; ++i) {
      int y = gen.Int(1980, 2030), m = gen.Int(1, 12);
      Date d{y, m, gen.Int(1, DaysInMonth(y, m))};
      std::optional<PartialDate> back = f.Parse(f.Render(d));
      REQUIRE(back.has_value());
      CHECK(*back == f.Project(d));
    }
  }
}

TEST_CASE("rendering examples") {
  Date d{2019, 1, 24};
  CHECK(FindDateFormat("month_day").Render(d) == "January 24");
  CHECK(FindDateFormat("mm_dd_yyyy").Render(d) == "01/24/2019");
  CHECK(FindDateFormat("month_ord").Render({2019, 2, 3}) == "February 3rd");
  CHECK(FindDateFormat("year").Render(d) == "2019");
}

TEST_CASE("parsing rejects impossible dates") {
  CHECK_FALSE(FindDateFormat("mm_dd").Parse("20/06").has_value());
  CHECK(FindDateFormat("dd_mm").Parse("20/06").has_value());
  CHECK_FALSE(FindDateFormat("mm_dd_yyyy").Parse("02/29/2019").has_value());
  CHECK(FindDateFormat("mm_dd").Parse("02/29").has_value());
  CHECK_FALSE(FindDateFormat("wd_mm_dd_yyyy").Parse("Monday, 10/15/2019").has_value());
  CHECK(FindDateFormat("wd_mm_dd_yyyy").Parse("Tuesday, 10/15/2019").has_value());
}

TEST_CASE("the January 24 example orders before February 3") {
  const DateFormat &a = FindDateFormat("month_day");
  const DateFormat &b = FindDateFormat("month_ord");
  CHECK(CompareAsRendered({2019, 1, 24}, a, {2019, 2, 3}, b) == Order::kBefore);
  CHECK(CompareAsRendered({2019, 1, 24}, a, {2020, 2, 3}, b) == std::nullopt);
  CHECK(CompareAsRendered({2019, 1, 24}, FindDateFormat("year"), {2019, 2, 3}, b) ==
        std::nullopt);
}

TEST_CASE("exhaustive day/month swap check") {
  const DateFormat &mm = FindDateFormat("mm_dd");
  const DateFormat &dd = FindDateFormat("dd_mm");
  for (int m1 = 1; m1 <= 12; ++m1) {
    for (int d1 = 1; d1 <= 12; ++d1) {
      for (int m2 = 1; m2 <= 12; ++m2) {
        for (int d2 = 1; d2 <= 12; ++d2) {
          Date a{2015, m1, d1}, b{2015, m2, d2};
          std::optional<Order> truth = CompareAsRendered(a, mm, b, dd);
          if (!truth) continue;
          DatePair p;
          p.date_a = a;
          p.date_b = b;
          p.format_a = "mm_dd";
          p.format_b = "dd_mm";
          p.label = *truth;
          CHECK(IsAmbiguous(a, mm, b, dd) == testing::RefAmbiguous(p));
        }
      }
    }
  }
  // 03/04 vs 04/03 read with swapped fields flips the order.
  CHECK(IsAmbiguous({2015, 3, 4}, mm, {2015, 4, 3}, dd));
}

TEST_CASE("generated pairs satisfy the invariants") {
  std::vector<DatePair> pairs = GenDatePairs(3000, {1980, 2030}, AllFormats(), 5);
  CHECK(pairs.size() == 3000);
  for (const DatePair &p : pairs) {
    CHECK(p.date_a != p.date_b);
    CHECK(p.ambiguous == testing::RefAmbiguous(p));
    CHECK(CountOccurrences(p.rendered, kMaskLiteral) == 1);
    CHECK(p.year == p.date_a.year);
    CHECK_FALSE(std::islower(static_cast<unsigned char>(p.rendered[0])));
    const DateFormat &fa = FindDateFormat(p.format_a);
    const DateFormat &fb = FindDateFormat(p.format_b);
    CHECK(CompareAsRendered(p.date_a, fa, p.date_b, fb) == p.label);
    if (!p.ambiguous) {
      // Antisymmetry.
      std::optional<Order> flipped = CompareAsRendered(p.date_b, fb, p.date_a, fa);
      REQUIRE(flipped.has_value());
      CHECK(*flipped != p.label);
    }
  }
  CHECK(DatePairsToJsonl(pairs) == DatePairsToJsonl(GenDatePairs(3000, {1980, 2030}, AllFormats(), 5)));
  CHECK(ParseDatePairsJsonl(DatePairsToJsonl(pairs), "p") == pairs);
}

TEST_CASE("generation rejects degenerate input") {
  CHECK_THROWS_AS(GenDatePairs(0, {2010, 2020}, AllFormats(), 1), ValidationError);
  CHECK_THROWS_AS(GenDatePairs(5, {2020, 2010}, AllFormats(), 1), ValidationError);
  CHECK_THROWS_AS(GenDatePairs(5, {2010, 2020}, {}, 1), ValidationError);
}

TEST_CASE("tied scores count as wrong") {
  testing::ConstantModel tie(std::log(0.5));
  std::vector<DatePair> pairs = GenDatePairs(200, {2010, 2020}, AllFormats(), 8);
  DateReport r = EvalDateComparison(tie, pairs);
  CHECK(r.overall.correct == 0);
  CHECK(r.overall.total + r.excluded_ambiguous == 200);
}

TEST_CASE("the oracle comparator is perfect and the random scorer is at chance") {
  std::vector<DatePair> pairs = GenDatePairs(10000, {1980, 2030}, AllFormats(), 19);
  DateReport oracle = EvalDateComparison(testing::OracleDateModel(), pairs);
  CHECK(oracle.overall.value() == 1.0);
  DateReport random = EvalDateComparison(testing::RandomScorer(3), pairs);
  CHECK(std::abs(random.overall.value() - 0.5) <= 0.02);
  DateReport with = EvalDateComparison(testing::OracleDateModel(), pairs, true);
  CHECK(with.ambiguous.total == oracle.excluded_ambiguous);
  CHECK(with.overall.total == oracle.overall.total);
}

TEST_CASE("future probe file is the expected partition") {
  std::vector<FutureProbe> probes = LoadFutureProbes(DataPath("future_relations.tsv"));
  CHECK(probes.size() == kExpectedFutureProbes);
  std::set<std::pair<ProbeCategory, AnswerDomain>> cells;
  for (const FutureProbe &p : probes) cells.insert({p.category, p.domain});
  CHECK(cells.size() == 6);
  bool needle = false, bowl = false;
  for (const FutureProbe &p : probes) {
    if (p.text == "The Space Needle is located in _X_.") {
      needle = p.category == ProbeCategory::kNever && p.domain == AnswerDomain::kCities;
    }
    if (p.text == "The Super Bowl will take place in _X_.") {
      bowl = p.category == ProbeCategory::kFrequent && p.domain == AnswerDomain::kCities;
    }
  }
  CHECK(needle);
  CHECK(bowl);
}

TEST_CASE("probe files are validated") {
  CHECK_THROWS_AS(ParseFutureProbes("a\tb\tc\n", "p", 1), ParseError);
  CHECK_THROWS_AS(ParseFutureProbes("text\tcategory\tdomain\nNo mask\tnever\tcities\n", "p", 1),
                  ParseError);
  CHECK_THROWS_AS(ParseFutureProbes("text\tcategory\tdomain\nX _X_\tsometimes\tcities\n", "p", 1),
                  ParseError);
  CHECK(ParseFutureProbes("text\tcategory\tdomain\nX _X_\trare\tcountries\n", "p", 86).size() == 1);
}

TEST_CASE("candidate lists and the zero-evidence entropy") {
  std::vector<std::string> countries = LoadCandidates(AnswerDomain::kCountries);
  std::vector<std::string> cities = LoadCandidates(AnswerDomain::kCities);
  CHECK(countries.size() == 249);
  CHECK(cities.size() == 200);
  CHECK(std::set<std::string>(countries.begin(), countries.end()).size() == 249);
  TemporalCountModel m({Regime::kTemporal, {}}, {});
  MaskedExample e;
  e.input = "Unrelated _X_.";
  e.target = "thing";
  e.year = 2015;
  m.Observe(e);
  std::vector<FutureProbe> probes = {{"The capital is in _X_.", ProbeCategory::kRare,
                                      AnswerDomain::kCountries}};
  EntropyCurve curve = CalibrationCurve(m, probes, {{AnswerDomain::kCountries, countries}},
                                        {2019, 2020});
  for (const auto &[year, h] : curve.at("rare")) {
    CHECK(std::abs(h - std::log(249.0)) <= 1e-9);
  }
}

}  // namespace
}  // namespace tprobe
