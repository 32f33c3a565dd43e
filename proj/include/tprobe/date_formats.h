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

// Calendar dates and the named format registry used by the date-comparison
// diagnostic. A format is a pattern over the tokens {weekday},
// {month_name}, {month_abbr}, {mm}, {dd}, {day}, {day_ord} and {year}.

#ifndef TPROBE_DATE_FORMATS_H_
#define TPROBE_DATE_FORMATS_H_

#include <compare>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace tprobe {

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  bool Valid() const;
  // 0 = Monday ... 6 = Sunday.
  int Weekday() const;
  // Days since 1970-01-01.
  long DayNumber() const;
  static Date FromDayNumber(long days);
  std::string ToIso() const;

  friend auto operator<=>(const Date &, const Date &) = default;
};

int DaysInMonth(int year, int month);

// Fields recovered from a rendered date. Missing fields are not encoded by
// the format.
struct PartialDate {
  std::optional<int> year;
  std::optional<int> month;
  std::optional<int> day;
  std::optional<int> weekday;

  friend bool operator==(const PartialDate &, const PartialDate &) = default;
};

class DateFormat {
 public:
  // Throws ValidationError on unknown tokens, repeated fields or a declared
  // specificity that does not match the encoded fields.
  DateFormat(std::string id, std::string pattern, int specificity);

  const std::string &id() const { return id_; }
  const std::string &pattern() const { return pattern_; }
  int specificity() const { return specificity_; }

  bool has_year() const { return has_year_; }
  bool has_month() const { return has_month_; }
  bool has_day() const { return has_day_; }
  bool has_weekday() const { return has_weekday_; }
  // Month and day both written as bare numbers, so a reader can swap them.
  bool numeric() const { return numeric_; }

  std::string Render(const Date &date) const;
  // Exact match of the whole text; nullopt if it does not fit the pattern
  // or names an impossible date.
  std::optional<PartialDate> Parse(const std::string &text) const;
  // The encoded fields of `date`.
  PartialDate Project(const Date &date) const;

 private:
  std::string id_;
  std::string pattern_;
  int specificity_;
  bool has_year_ = false;
  bool has_month_ = false;
  bool has_day_ = false;
  bool has_weekday_ = false;
  bool numeric_ = false;
  std::vector<std::string> tokens_;  // capture order
  std::regex regex_;
};

// TSV "id<TAB>pattern<TAB>specificity" with a header row; '#' lines skipped.
std::vector<DateFormat> ParseDateFormats(std::string_view contents,
                                         const std::string &source);
std::vector<DateFormat> LoadDateFormats(const std::string &path);
// The shipped registry (date_formats.tsv in the data directory).
const std::vector<DateFormat> &DefaultDateFormats();
const DateFormat &FindDateFormat(const std::string &id);

extern const char *const kMonthNames[12];
extern const char *const kWeekdayNames[7];

}  // namespace tprobe

#endif  // TPROBE_DATE_FORMATS_H_
