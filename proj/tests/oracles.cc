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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tprobe/date_formats.h"

namespace tprobe::testing {

std::string RefNormalize(const std::string &s) {
  static const std::string kPunct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";
  std::string cleaned;
  for (char c : s) {
    if (kPunct.find(c) != std::string::npos) continue;
    cleaned += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  std::istringstream in(cleaned);
  std::string word, out;
  while (in >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

namespace {

std::vector<std::string> Words(const std::string &s) {
  std::istringstream in(RefNormalize(s));
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double RefTokenF1(const std::string &pred, const std::string &gold) {
  std::vector<std::string> p = Words(pred), g = Words(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  size_t i = 0, j = 0, common = 0;
  while (i < p.size() && j < g.size()) {
    if (p[i] == g[j]) {
      ++common, ++i, ++j;
    } else if (p[i] < g[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  if (common == 0) return 0.0;
  double precision = static_cast<double>(common) / static_cast<double>(p.size());
  double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * precision * recall / (precision + recall);
}

double RefMaxF1(const std::string &pred, const std::vector<std::string> &golds) {
  double best = 0.0;
  for (const std::string &g : golds) best = std::max(best, RefTokenF1(pred, g));
  return best;
}

std::map<int, double> RefPerYear(const std::vector<RefQuery> &rows) {
  std::map<int, std::vector<double>> groups;
  for (const RefQuery &r : rows) groups[r.year].push_back(r.f1);
  std::map<int, double> out;
  for (auto &[year, v] : groups) {
    double s = 0;
    for (double x : v) s += x;
    out[year] = s / static_cast<double>(v.size());
  }
  return out;
}

double RefMacro(const std::vector<RefQuery> &rows) {
  std::map<int, double> per_year = RefPerYear(rows);
  double s = 0;
  for (auto &[year, m] : per_year) s += m;
  return s / static_cast<double>(per_year.size());
}

namespace {

struct Fields {
  bool year, month, day, numeric;
};

Fields FieldsOf(const std::string &format_id) {
  const std::string &p = FindDateFormat(format_id).pattern();
  auto has = [&](const char *t) { return p.find(t) != std::string::npos; };
  return {has("{year}"), has("{mm}") || has("{month"),
          has("{dd}") || has("{day}") || has("{day_ord}"), has("{mm}") && has("{dd}")};
}

// -1, 0 or 1 comparing the fields both sides show; year-less sides are read
// in a shared year.
int Compare(const Date &a, const Fields &fa, const Date &b, const Fields &fb) {
  std::vector<std::pair<int, int>> keys;
  if (fa.year && fb.year) keys.push_back({a.year, b.year});
  if (fa.month && fb.month) keys.push_back({a.month, b.month});
  if (fa.day && fb.day) keys.push_back({a.day, b.day});
  for (auto [x, y] : keys) {
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

std::vector<Date> Readings(const Date &d, const Fields &f) {
  std::vector<Date> out{d};
  Date swapped{d.year, d.day, d.month};
  if (f.numeric && swapped.Valid()) out.push_back(swapped);
  return out;
}

}  // namespace

bool RefAmbiguous(const DatePair &pair) {
  Fields fa = FieldsOf(pair.format_a), fb = FieldsOf(pair.format_b);
  int label = pair.label == Order::kBefore ? -1 : 1;
  for (const Date &a : Readings(pair.date_a, fa)) {
    for (const Date &b : Readings(pair.date_b, fb)) {
      if (Compare(a, fa, b, fb) != label) return true;
    }
  }
  return false;
}

std::map<int, size_t> RefQueryCounts(const FactStore &store,
                                     const std::set<SubjectRelation> &pairs) {
  std::map<int, size_t> counts;
  const YearRange &p = store.period();
  for (const auto &[subject, relation] : pairs) {
    for (int year = p.first; year <= p.last; ++year) {
      bool any = false;
      for (const TemporalFact &f : store.facts()) {
        if (f.subject_id != subject || f.relation_id != relation) continue;
        int lo = f.interval.start ? *f.interval.start : p.first;
        int hi = f.interval.end ? *f.interval.end : p.last;
        if (lo <= year && year <= hi) any = true;
      }
      if (any) ++counts[year];
    }
  }
  return counts;
}

namespace {

// Parses one rendered side under every registry format.
std::optional<std::pair<PartialDate, const DateFormat *>> ReadSide(std::string text) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (const DateFormat &f : DefaultDateFormats()) {
      if (auto p = f.Parse(text)) return std::make_pair(*p, &f);
    }
    if (!text.empty()) text[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(text[0])));
  }
  return std::nullopt;
}

}  // namespace

SpanScore OracleDateModel::Score(const std::string &input, int, const std::string &target) const {
  const std::string sep = " is _X_ ";
  size_t at = input.find(sep);
  std::string lhs = input.substr(0, at);
  std::string rhs = input.substr(at + sep.size());
  if (!rhs.empty() && rhs.back() == '.') rhs.pop_back();
  auto a = ReadSide(lhs), b = ReadSide(rhs);
  if (!a || !b) return {std::log(0.5), 1};
  const PartialDate &pa = a->first, &pb = b->first;
  int s = 0;
  if (pa.year && pb.year && *pa.year != *pb.year) s = *pa.year < *pb.year ? -1 : 1;
  if (s == 0 && pa.month && pb.month && *pa.month != *pb.month) s = *pa.month < *pb.month ? -1 : 1;
  if (s == 0 && pa.day && pb.day && *pa.day != *pb.day) s = *pa.day < *pb.day ? -1 : 1;
  std::string truth = s < 0 ? "before" : "after";
  return {target == truth ? 0.0 : std::log(1e-9), 1};
}

std::vector<RankedAnswer> OracleDateModel::Predict(const std::string &input, int year,
                                                   size_t) const {
  std::vector<RankedAnswer> out;
  for (const char *w : {"after", "before"}) out.push_back({w, Score(input, year, w).log_prob});
  std::stable_sort(out.begin(), out.end(),
                   [](const auto &x, const auto &y) { return x.log_prob > y.log_prob; });
  return out;
}

std::vector<double> OracleDateModel::CandidateDistribution(
    const std::string &input, int year, const std::vector<std::string> &candidates) const {
  std::vector<double> p;
  double z = 0;
  for (const std::string &c : candidates) z += std::exp(Score(input, year, c).log_prob);
  for (const std::string &c : candidates) p.push_back(std::exp(Score(input, year, c).log_prob) / z);
  return p;
}

namespace {

double HashUnit(uint64_t seed, const std::string &a, const std::string &b) {
  uint64_t h = 1469598103934665603ULL ^ seed;
  for (char c : a + '\x1f' + b) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::mt19937_64 mix(h);
  return (static_cast<double>(mix() >> 11) + 0.5) / 9007199254740992.0;
}

}  // namespace

SpanScore RandomScorer::Score(const std::string &input, int, const std::string &target) const {
  return {std::log(HashUnit(seed_, input, target)), 1};
}

std::vector<RankedAnswer> RandomScorer::Predict(const std::string &input, int year,
                                                size_t) const {
  return {{"x", Score(input, year, "x").log_prob}};
}

std::vector<double> RandomScorer::CandidateDistribution(
    const std::string &, int, const std::vector<std::string> &candidates) const {
  return std::vector<double>(candidates.size(), 1.0 / static_cast<double>(candidates.size()));
}

SpanScore ConstantModel::Score(const std::string &, int, const std::string &target) const {
  return {log_prob_, TargetLength(target)};
}

std::vector<RankedAnswer> ConstantModel::Predict(const std::string &, int, size_t) const {
  return {};
}

std::vector<double> ConstantModel::CandidateDistribution(
    const std::string &, int, const std::vector<std::string> &candidates) const {
  return std::vector<double>(candidates.size(), 1.0 / static_cast<double>(candidates.size()));
}

int Gen::Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Gen::Real01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

std::string Gen::AnswerText() {
  static const std::vector<std::string> kWords = {
      "the", "A", "an", "Liverpool", "F.C.", "real", "Madrid", "madrid", "club", "of",
      "São", "Paulo", "U.S.", "new-york", "city", "Lakers!", "los", "ANGELES", "1st", "x"};
  std::string out;
  int n = Int(0, 5);
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += Coin(0.1) ? "  " : " ";
    out += Pick(kWords);
  }
  if (Coin(0.1)) out += ".";
  if (Coin(0.05)) out = " " + out + "\t";
  return out;
}

std::vector<TemporalFact> RandomFacts(Gen &gen, int subjects, const YearRange &period) {
  std::vector<TemporalFact> facts;
  const std::vector<std::string> relations = {"P54", "P108"};
  for (int s = 0; s < subjects; ++s) {
    std::string sid = "Q" + std::to_string(100 + s);
    for (const std::string &rel : relations) {
      if (gen.Coin(0.3)) continue;
      int n = gen.Int(1, 4);
      for (int k = 0; k < n; ++k) {
        TemporalFact f;
        f.subject_id = sid;
        f.subject_name = "Subject " + std::to_string(s);
        f.relation_id = rel;
        int obj = gen.Int(0, 6);
        f.object_id = "O" + std::to_string(obj);
        f.object_name = "Object " + std::to_string(obj);
        int a = gen.Int(period.first - 3, period.last + 2);
        int b = gen.Int(a, a + gen.Int(0, 6));
        if (!gen.Coin(0.15)) f.interval.start = a;
        if (!gen.Coin(0.15)) f.interval.end = b;
        facts.push_back(f);
      }
    }
  }
  return facts;
}

std::string CliPath() { return TPROBE_CLI_PATH; }

}  // namespace tprobe::testing
