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

// Hand-built probe suites: future-relation cloze probes scored by closed-set
// entropy, and before/after date comparisons.

#ifndef TPROBE_DIAGNOSTICS_H_
#define TPROBE_DIAGNOSTICS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tprobe/corpus.h"
#include "tprobe/date_formats.h"
#include "tprobe/evaluator.h"
#include "tprobe/model.h"

namespace tprobe {

enum class ProbeCategory { kFrequent, kRare, kNever };
enum class AnswerDomain { kCities, kCountries };

std::string_view CategoryName(ProbeCategory c);
ProbeCategory ParseCategory(std::string_view name);
std::string_view DomainName(AnswerDomain d);
AnswerDomain ParseDomain(std::string_view name);

struct FutureProbe {
  std::string text;
  ProbeCategory category = ProbeCategory::kFrequent;
  AnswerDomain domain = AnswerDomain::kCities;
};

inline constexpr size_t kExpectedFutureProbes = 86;

// TSV "text<TAB>category<TAB>domain" with a header. Schema problems throw
// ParseError; a probe count other than `expected` only warns.
std::vector<FutureProbe> ParseFutureProbes(std::string_view contents,
                                           const std::string &source,
                                           size_t expected = kExpectedFutureProbes);
std::vector<FutureProbe> LoadFutureProbes(const std::string &path);

// The shipped candidate list for a domain (us_cities_200.txt or
// countries_249.txt).
std::vector<std::string> LoadCandidates(AnswerDomain domain);

// Mean closed-set entropy per category and year. Each probe is scored
// against the candidates of its domain; domains missing from `candidates`
// are skipped.
EntropyCurve CalibrationCurve(const Model &model, const std::vector<FutureProbe> &probes,
                              const std::map<AnswerDomain, std::vector<std::string>> &candidates,
                              const std::vector<int> &years,
                              InputStyle style = InputStyle::kPlain);

enum class Order { kBefore, kAfter };
std::string_view OrderWord(Order order);

struct DatePair {
  std::string id;
  Date date_a;
  Date date_b;
  std::string format_a;
  std::string format_b;
  std::string rendered;  // "<A> is _X_ <B>."
  Order label = Order::kBefore;
  bool ambiguous = false;
  int year = 0;  // passed as t when scoring

  friend bool operator==(const DatePair &, const DatePair &) = default;
};

// Ordering of a against b as a reader sees them: years are compared only
// when both formats carry one, then months, then days, each only when both
// formats encode it. nullopt when the compared fields are all equal, or when
// a format omits the year and the years differ.
std::optional<Order> CompareAsRendered(const Date &a, const DateFormat &fa, const Date &b,
                                       const DateFormat &fb);

// The readings a format admits: the date itself, plus day and month swapped
// for all-numeric formats when the day could be a month.
std::vector<Date> Interpretations(const Date &date, const DateFormat &format);

// True when some pair of readings orders the dates differently from the
// true reading.
bool IsAmbiguous(const Date &a, const DateFormat &fa, const Date &b, const DateFormat &fb);

// Seeded pairs of distinct dates drawn uniformly from the year range with
// formats drawn uniformly from `formats`. Pairs the reader cannot order
// are redrawn. Throws ValidationError on count 0 or an empty format list.
std::vector<DatePair> GenDatePairs(size_t count, const YearRange &years,
                                   const std::vector<const DateFormat *> &formats,
                                   uint64_t seed);
std::vector<const DateFormat *> AllFormats();

// The true statements, masked at the order word.
std::vector<MaskedExample> DatePairsToExamples(const std::vector<DatePair> &pairs);

std::string DatePairsToJsonl(const std::vector<DatePair> &pairs);
std::vector<DatePair> ParseDatePairsJsonl(std::string_view contents, const std::string &source);

struct Accuracy {
  size_t correct = 0;
  size_t total = 0;
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct DateReport {
  Accuracy overall;
  std::map<std::string, Accuracy> per_format;
  std::map<int, Accuracy> per_specificity;
  // Scored only when ambiguous pairs are included; never part of overall.
  Accuracy ambiguous;
  size_t excluded_ambiguous = 0;
};

// Correct iff the right order word scores strictly higher than the other;
// ties are wrong. A pair counts toward each distinct format and
// specificity level it uses.
DateReport EvalDateComparison(const Model &model, const std::vector<DatePair> &pairs,
                              bool include_ambiguous = false);

}  // namespace tprobe

#endif  // TPROBE_DIAGNOSTICS_H_
