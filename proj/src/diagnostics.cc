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

#include "tprobe/diagnostics.h"

#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tprobe {

namespace {

constexpr int kMaxDrawsPerPair = 10000;

Date ParseIsoDate(const std::string &s) {
  Date d;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &d.year, &d.month, &d.day) != 3 || !d.Valid()) {
    throw ValidationError("bad date '" + s + "'");
  }
  return d;
}

int Sign(int a, int b) { return a < b ? -1 : a > b ? 1 : 0; }

}  // namespace

std::string_view CategoryName(ProbeCategory c) {
  switch (c) {
    case ProbeCategory::kFrequent: return "frequent";
    case ProbeCategory::kRare: return "rare";
    case ProbeCategory::kNever: return "never";
  }
  return "?";
}

ProbeCategory ParseCategory(std::string_view name) {
  if (name == "frequent") return ProbeCategory::kFrequent;
  if (name == "rare") return ProbeCategory::kRare;
  if (name == "never") return ProbeCategory::kNever;
  throw ValidationError("unknown probe category '" + std::string(name) +
                        "' (frequent, rare or never)");
}

std::string_view DomainName(AnswerDomain d) {
  return d == AnswerDomain::kCities ? "cities" : "countries";
}

AnswerDomain ParseDomain(std::string_view name) {
  if (name == "cities") return AnswerDomain::kCities;
  if (name == "countries") return AnswerDomain::kCountries;
  throw ValidationError("unknown answer domain '" + std::string(name) +
                        "' (cities or countries)");
}

std::vector<FutureProbe> ParseFutureProbes(std::string_view contents,
                                           const std::string &source, size_t expected) {
  std::vector<FutureProbe> probes;
  int row = 0;
  bool header_seen = false;
  for (const std::string &line : Split(contents, '\n')) {
    ++row;
    if (Trim(line).empty()) continue;
    std::vector<std::string> cols = Split(line, '\t');
    if (!header_seen) {
      if (cols.size() != 3 || cols[0] != "text" || cols[1] != "category" ||
          Trim(cols[2]) != "domain") {
        throw ParseError(source, row, 1, "expected header text<TAB>category<TAB>domain");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 3) throw ParseError(source, row, 1, "expected 3 columns");
    FutureProbe p;
    p.text = cols[0];
    if (CountOccurrences(p.text, kMaskLiteral) != 1) {
      throw ParseError(source, row, 1, "text must contain the mask literal exactly once");
    }
    try {
      p.category = ParseCategory(Trim(cols[1]));
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 2, e.what());
    }
    try {
      p.domain = ParseDomain(Trim(cols[2]));
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 3, e.what());
    }
    probes.push_back(std::move(p));
  }
  if (!header_seen) throw ParseError(source, 1, 1, "empty probe file");
  if (probes.size() != expected) {
    Warn(source + ": expected " + std::to_string(expected) + " probes, found " +
         std::to_string(probes.size()));
  }
  return probes;
}

std::vector<FutureProbe> LoadFutureProbes(const std::string &path) {
  return ParseFutureProbes(ReadFile(path), path);
}

std::vector<std::string> LoadCandidates(AnswerDomain domain) {
  return ReadList(DataPath(domain == AnswerDomain::kCities ? "us_cities_200.txt"
                                                           : "countries_249.txt"));
}

EntropyCurve CalibrationCurve(const Model &model, const std::vector<FutureProbe> &probes,
                              const std::map<AnswerDomain, std::vector<std::string>> &candidates,
                              const std::vector<int> &years, InputStyle style) {
  std::map<std::string, std::map<int, std::pair<double, size_t>>> sums;
  for (const FutureProbe &p : probes) {
    auto it = candidates.find(p.domain);
    if (it == candidates.end()) continue;
    for (const auto &[year, h] : ClosedSetEntropy(model, p.text, it->second, years, style)) {
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

std::string_view OrderWord(Order order) {
  return order == Order::kBefore ? "before" : "after";
}

std::optional<Order> CompareAsRendered(const Date &a, const DateFormat &fa, const Date &b,
                                       const DateFormat &fb) {
  const bool both_years = fa.has_year() && fb.has_year();
  if (!both_years && a.year != b.year) return std::nullopt;
  int s = 0;
  if (both_years) s = Sign(a.year, b.year);
  if (s == 0 && fa.has_month() && fb.has_month()) s = Sign(a.month, b.month);
  if (s == 0 && fa.has_day() && fb.has_day()) s = Sign(a.day, b.day);
  if (s == 0) return std::nullopt;
  return s < 0 ? Order::kBefore : Order::kAfter;
}

std::vector<Date> Interpretations(const Date &date, const DateFormat &format) {
  std::vector<Date> out{date};
  if (format.numeric() && date.day <= 12 && date.day != date.month) {
    out.push_back({date.year, date.day, date.month});
  }
  return out;
}

bool IsAmbiguous(const Date &a, const DateFormat &fa, const Date &b, const DateFormat &fb) {
  std::optional<Order> truth = CompareAsRendered(a, fa, b, fb);
  for (const Date &ra : Interpretations(a, fa)) {
    for (const Date &rb : Interpretations(b, fb)) {
      if (CompareAsRendered(ra, fa, rb, fb) != truth) return true;
    }
  }
  return false;
}

std::vector<const DateFormat *> AllFormats() {
  std::vector<const DateFormat *> out;
  for (const DateFormat &f : DefaultDateFormats()) out.push_back(&f);
  return out;
}

std::vector<DatePair> GenDatePairs(size_t count, const YearRange &years,
                                   const std::vector<const DateFormat *> &formats,
                                   uint64_t seed) {
  if (count == 0) throw ValidationError("date pair count must be >= 1");
  if (formats.empty()) throw ValidationError("no date formats given");
  if (years.first > years.last || years.first < 1) {
    throw ValidationError("degenerate year range " + years.ToString());
  }
  const long first_day = Date{years.first, 1, 1}.DayNumber();
  const long span = Date{years.last, 12, 31}.DayNumber() - first_day + 1;
  Rng rng(seed);
  std::vector<DatePair> pairs;
  pairs.reserve(count);
  char id[32];
  for (size_t i = 0; i < count; ++i) {
    DatePair pair;
    int draws = 0;
    while (true) {
      if (++draws > kMaxDrawsPerPair) {
        throw RuntimeError("cannot draw an orderable date pair with these formats");
      }
      Date a = Date::FromDayNumber(first_day + static_cast<long>(rng.UniformIndex(span)));
      Date b = Date::FromDayNumber(first_day + static_cast<long>(rng.UniformIndex(span)));
      const DateFormat &fa = *formats[rng.UniformIndex(formats.size())];
      const DateFormat &fb = *formats[rng.UniformIndex(formats.size())];
      if (a == b) continue;
      std::optional<Order> order = CompareAsRendered(a, fa, b, fb);
      if (!order) continue;
      std::snprintf(id, sizeof(id), "d%07zu", i);
      pair.id = id;
      pair.date_a = a;
      pair.date_b = b;
      pair.format_a = fa.id();
      pair.format_b = fb.id();
      std::string text = fa.Render(a) + " is " + std::string(kMaskLiteral) + " " +
                         fb.Render(b) + ".";
      text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
      pair.rendered = text;
      pair.label = *order;
      pair.ambiguous = IsAmbiguous(a, fa, b, fb);
      pair.year = a.year;
      break;
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<MaskedExample> DatePairsToExamples(const std::vector<DatePair> &pairs) {
  std::vector<MaskedExample> out;
  out.reserve(pairs.size());
  for (const DatePair &p : pairs) {
    MaskedExample ex;
    ex.input = p.rendered;
    ex.target = std::string(OrderWord(p.label));
    ex.year = p.year;
    ex.kind = SpanKind::kDate;
    ex.doc_id = p.id;
    ex.span_start = p.rendered.find(kMaskLiteral);
    out.push_back(std::move(ex));
  }
  return out;
}

std::string DatePairsToJsonl(const std::vector<DatePair> &pairs) {
  std::string out;
  for (const DatePair &p : pairs) {
    nlohmann::ordered_json obj;
    obj["id"] = p.id;
    obj["date_a"] = p.date_a.ToIso();
    obj["date_b"] = p.date_b.ToIso();
    obj["format_a"] = p.format_a;
    obj["format_b"] = p.format_b;
    obj["rendered"] = p.rendered;
    obj["label"] = OrderWord(p.label);
    obj["ambiguous"] = p.ambiguous;
    obj["year"] = p.year;
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<DatePair> ParseDatePairsJsonl(std::string_view contents, const std::string &source) {
  using nlohmann::json;
  std::vector<DatePair> pairs;
  int row = 0;
  for (const std::string &line : Split(contents, '\n')) {
    ++row;
    if (Trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      DatePair p;
      p.id = obj.at("id").get<std::string>();
      p.date_a = ParseIsoDate(obj.at("date_a").get<std::string>());
      p.date_b = ParseIsoDate(obj.at("date_b").get<std::string>());
      p.format_a = obj.at("format_a").get<std::string>();
      p.format_b = obj.at("format_b").get<std::string>();
      p.rendered = obj.at("rendered").get<std::string>();
      std::string label = obj.at("label").get<std::string>();
      if (label != "before" && label != "after") {
        throw ValidationError("label must be before or after");
      }
      p.label = label == "before" ? Order::kBefore : Order::kAfter;
      p.ambiguous = obj.at("ambiguous").get<bool>();
      p.year = obj.at("year").get<int>();
      pairs.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ParseError(source, row, 1, e.what());
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 1, e.what());
    }
  }
  return pairs;
}

DateReport EvalDateComparison(const Model &model, const std::vector<DatePair> &pairs,
                              bool include_ambiguous) {
  DateReport report;
  for (const DatePair &p : pairs) {
    if (p.ambiguous && !include_ambiguous) {
      ++report.excluded_ambiguous;
      continue;
    }
    Order other = p.label == Order::kBefore ? Order::kAfter : Order::kBefore;
    double right = model.Score(p.rendered, p.year, std::string(OrderWord(p.label))).log_prob;
    double wrong = model.Score(p.rendered, p.year, std::string(OrderWord(other))).log_prob;
    const bool correct = right > wrong;
    auto tally = [&](Accuracy &acc) {
      ++acc.total;
      if (correct) ++acc.correct;
    };
    if (p.ambiguous) {
      tally(report.ambiguous);
      continue;
    }
    tally(report.overall);
    std::set<std::string> formats{p.format_a, p.format_b};
    std::set<int> levels;
    for (const std::string &f : formats) {
      tally(report.per_format[f]);
      levels.insert(FindDateFormat(f).specificity());
    }
    for (int level : levels) tally(report.per_specificity[level]);
  }
  return report;
}

}  // namespace tprobe
