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

#include "tprobe/date_formats.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "tprobe/common.h"

namespace tprobe {

const char *const kMonthNames[12] = {"January", "February", "March",     "April",
                                     "May",     "June",     "July",      "August",
                                     "September", "October", "November", "December"};
const char *const kWeekdayNames[7] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                      "Friday", "Saturday", "Sunday"};

namespace {

const char *const kMonthAbbr[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::string Alternation(const char *const *names, int n) {
  std::string out = "(";
  for (int i = 0; i < n; ++i) out += (i ? "|" : "") + std::string(names[i]);
  return out + ")";
}

int IndexOf(const char *const *names, int n, const std::string &s) {
  for (int i = 0; i < n; ++i) {
    if (s == names[i]) return i;
  }
  return -1;
}

std::string Ordinal(int day) {
  const char *suffix = "th";
  if (day % 100 < 11 || day % 100 > 13) {
    if (day % 10 == 1) suffix = "st";
    if (day % 10 == 2) suffix = "nd";
    if (day % 10 == 3) suffix = "rd";
  }
  return std::to_string(day) + suffix;
}

std::string Pad2(int v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

std::string RegexEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("\\^$.|?*+()[]{}/").find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

bool Date::Valid() const {
  return month >= 1 && month <= 12 && day >= 1 && day <= DaysInMonth(year, month);
}

int DaysInMonth(int year, int month) {
  static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return month == 2 && leap ? 29 : kDays[month - 1];
}

// Howard Hinnant's days_from_civil.
long Date::DayNumber() const {
  long y = year - (month <= 2 ? 1 : 0);
  long era = (y >= 0 ? y : y - 399) / 400;
  long yoe = y - era * 400;
  long mp = (month + 9) % 12;
  long doy = (153 * mp + 2) / 5 + day - 1;
  long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date Date::FromDayNumber(long z) {
  z += 719468;
  long era = (z >= 0 ? z : z - 146096) / 146097;
  long doe = z - era * 146097;
  long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  long y = yoe + era * 400;
  long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  long mp = (5 * doy + 2) / 153;
  int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  return {static_cast<int>(y + (m <= 2 ? 1 : 0)), m, d};
}

int Date::Weekday() const {
  // 1970-01-01 was a Thursday (index 3).
  long n = (DayNumber() + 3) % 7;
  return static_cast<int>(n < 0 ? n + 7 : n);
}

std::string Date::ToIso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

DateFormat::DateFormat(std::string id, std::string pattern, int specificity)
    : id_(std::move(id)), pattern_(std::move(pattern)), specificity_(specificity) {
  static const std::map<std::string, std::string> kTokenRegex = {
      {"weekday", Alternation(kWeekdayNames, 7)},
      {"month_name", Alternation(kMonthNames, 12)},
      {"month_abbr", Alternation(kMonthAbbr, 12)},
      {"mm", "([0-9]{2})"},
      {"dd", "([0-9]{2})"},
      {"day", "([0-9]{1,2})"},
      {"day_ord", "([0-9]{1,2})(?:st|nd|rd|th)"},
      {"year", "([0-9]{4})"},
  };
  std::string re;
  std::set<std::string> fields;
  size_t pos = 0;
  while (pos < pattern_.size()) {
    size_t open = pattern_.find('{', pos);
    if (open == std::string::npos) {
      re += RegexEscape(std::string_view(pattern_).substr(pos));
      break;
    }
    re += RegexEscape(std::string_view(pattern_).substr(pos, open - pos));
    size_t close = pattern_.find('}', open);
    if (close == std::string::npos) {
      throw ValidationError("format " + id_ + ": unclosed '{'");
    }
    std::string token = pattern_.substr(open + 1, close - open - 1);
    auto it = kTokenRegex.find(token);
    if (it == kTokenRegex.end()) {
      throw ValidationError("format " + id_ + ": unknown token {" + token + "}");
    }
    std::string field = token == "weekday"                             ? "weekday"
                        : token == "year"                              ? "year"
                        : (token == "mm" || StartsWith(token, "month")) ? "month"
                                                                        : "day";
    if (!fields.insert(field).second) {
      throw ValidationError("format " + id_ + ": field " + field + " appears twice");
    }
    tokens_.push_back(token);
    re += it->second;
    pos = close + 1;
  }
  has_year_ = fields.count("year") > 0;
  has_month_ = fields.count("month") > 0;
  has_day_ = fields.count("day") > 0;
  has_weekday_ = fields.count("weekday") > 0;
  numeric_ = std::find(tokens_.begin(), tokens_.end(), "mm") != tokens_.end() &&
             std::find(tokens_.begin(), tokens_.end(), "dd") != tokens_.end();
  if (fields.empty()) throw ValidationError("format " + id_ + " encodes no field");
  if (static_cast<int>(fields.size()) != specificity_) {
    throw ValidationError("format " + id_ + " declares specificity " +
                          std::to_string(specificity_) + " but encodes " +
                          std::to_string(fields.size()) + " fields");
  }
  regex_ = std::regex(re);
}

std::string DateFormat::Render(const Date &date) const {
  if (!date.Valid()) throw ValidationError("invalid date " + date.ToIso());
  std::string out;
  size_t pos = 0;
  while (pos < pattern_.size()) {
    size_t open = pattern_.find('{', pos);
    if (open == std::string::npos) {
      out += pattern_.substr(pos);
      break;
    }
    out += pattern_.substr(pos, open - pos);
    size_t close = pattern_.find('}', open);
    std::string token = pattern_.substr(open + 1, close - open - 1);
    if (token == "weekday") out += kWeekdayNames[date.Weekday()];
    if (token == "month_name") out += kMonthNames[date.month - 1];
    if (token == "month_abbr") out += kMonthAbbr[date.month - 1];
    if (token == "mm") out += Pad2(date.month);
    if (token == "dd") out += Pad2(date.day);
    if (token == "day") out += std::to_string(date.day);
    if (token == "day_ord") out += Ordinal(date.day);
    if (token == "year") out += std::to_string(date.year);
    pos = close + 1;
  }
  return out;
}

std::optional<PartialDate> DateFormat::Parse(const std::string &text) const {
  std::smatch m;
  if (!std::regex_match(text, m, regex_)) return std::nullopt;
  PartialDate out;
  for (size_t i = 0; i < tokens_.size(); ++i) {
    const std::string &token = tokens_[i];
    std::string value = m[i + 1].str();
    if (token == "weekday") out.weekday = IndexOf(kWeekdayNames, 7, value);
    if (token == "month_name") out.month = IndexOf(kMonthNames, 12, value) + 1;
    if (token == "month_abbr") out.month = IndexOf(kMonthAbbr, 12, value) + 1;
    if (token == "mm") out.month = std::stoi(value);
    if (token == "dd" || token == "day" || token == "day_ord") out.day = std::stoi(value);
    if (token == "year") out.year = std::stoi(value);
  }
  if (out.month && (*out.month < 1 || *out.month > 12)) return std::nullopt;
  if (out.day) {
    // 2000 is a leap year, so Feb 29 stays readable without a year.
    int limit = out.month ? DaysInMonth(out.year.value_or(2000), *out.month) : 31;
    if (*out.day < 1 || *out.day > limit) return std::nullopt;
  }
  if (out.weekday && out.year && out.month && out.day &&
      Date{*out.year, *out.month, *out.day}.Weekday() != *out.weekday) {
    return std::nullopt;
  }
  return out;
}

PartialDate DateFormat::Project(const Date &date) const {
  PartialDate out;
  if (has_year_) out.year = date.year;
  if (has_month_) out.month = date.month;
  if (has_day_) out.day = date.day;
  if (has_weekday_) out.weekday = date.Weekday();
  return out;
}

std::vector<DateFormat> ParseDateFormats(std::string_view contents,
                                         const std::string &source) {
  std::vector<DateFormat> formats;
  std::set<std::string> ids;
  int row = 0;
  bool header = true;
  for (const std::string &raw : Split(contents, '\n')) {
    ++row;
    std::string line(Trim(raw));
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = Split(raw, '\t');
    if (header) {
      header = false;
      if (cols.size() == 3 && cols[0] == "id") continue;
    }
    if (cols.size() != 3) throw ParseError(source, row, 1, "expected 3 tab-separated columns");
    try {
      DateFormat f(cols[0], cols[1], ParseInt(Trim(cols[2]), "specificity"));
      if (!ids.insert(f.id()).second) {
        throw ValidationError("duplicate format id " + f.id());
      }
      formats.push_back(std::move(f));
    } catch (const ParseError &) {
      throw;
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 1, e.what());
    }
  }
  return formats;
}

std::vector<DateFormat> LoadDateFormats(const std::string &path) {
  return ParseDateFormats(ReadFile(path), path);
}

const std::vector<DateFormat> &DefaultDateFormats() {
  static const std::vector<DateFormat> formats = LoadDateFormats(DataPath("date_formats.tsv"));
  return formats;
}

const DateFormat &FindDateFormat(const std::string &id) {
  for (const DateFormat &f : DefaultDateFormats()) {
    if (f.id() == id) return f;
  }
  throw ValidationError("unknown date format '" + id + "'");
}

}  // namespace tprobe
