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

#include "tprobe/corpus.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace tprobe {

namespace {

bool IsAlnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

const char kMonths[] =
    "(January|February|March|April|May|June|July|August|September|October|"
    "November|December)";

struct DatePatterns {
  std::regex month_day_year{std::string(kMonths) +
                            R"( ([0-9]{1,2}), ((?:19|20)[0-9]{2}))"};
  std::regex day_month_year{std::string(R"(([0-9]{1,2}) )") + kMonths +
                            R"( ((?:19|20)[0-9]{2}))"};
  std::regex numeric{R"(([0-9]{1,2})/([0-9]{1,2})/((?:19|20)[0-9]{2}))"};
  std::regex year{R"((?:19|20)[0-9]{2})"};
};

const DatePatterns &Patterns() {
  static const DatePatterns patterns;
  return patterns;
}

// Word boundary on both sides of [start, end).
bool Bounded(const std::string &s, size_t start, size_t end) {
  return (start == 0 || !IsAlnum(s[start - 1])) &&
         (end >= s.size() || !IsAlnum(s[end]));
}

// Rejects digits that belong to numbers other than a year: "$2019",
// "3.2019", "12:2019", "2019/5", "2019.5".
bool PlausibleBareYear(const std::string &s, size_t start, size_t end) {
  if (!Bounded(s, start, end)) return false;
  if (start > 0 && std::string_view("/$.:#").find(s[start - 1]) != std::string_view::npos) {
    return false;
  }
  if (end < s.size()) {
    char next = s[end];
    if (next == '/') return false;
    if ((next == '.' || next == ',' || next == ':') && end + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[end + 1]))) {
      return false;
    }
  }
  return true;
}

int ToInt(const std::ssub_match &m) { return std::stoi(m.str()); }

const std::vector<std::string> &FallbackAbbreviations() {
  static const std::vector<std::string> list = {
      "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Inc.",
      "Ltd.", "Co.", "Corp.", "vs.", "etc.", "e.g.", "i.e.", "U.S.", "U.K."};
  return list;
}

}  // namespace

std::string_view SpanKindName(SpanKind kind) {
  return kind == SpanKind::kDate ? "date" : "entity";
}

SpanKind ParseSpanKind(std::string_view name) {
  if (name == "date") return SpanKind::kDate;
  if (name == "entity") return SpanKind::kEntity;
  throw ValidationError("unknown span kind '" + std::string(name) + "'");
}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations)
    : abbreviations_(abbreviations.begin(), abbreviations.end()) {}

const SentenceSplitter &SentenceSplitter::Default() {
  static const SentenceSplitter splitter = [] {
    std::string path = DataPath("abbreviations.txt");
    if (std::filesystem::exists(path)) return SentenceSplitter(ReadList(path));
    return SentenceSplitter(FallbackAbbreviations());
  }();
  return splitter;
}

std::vector<TextSpan> SentenceSplitter::Split(std::string_view text) const {
  std::vector<TextSpan> sentences;
  const size_t n = text.size();
  size_t start = 0;
  auto emit = [&](size_t begin, size_t end) {
    while (begin < end && IsSpace(text[begin])) ++begin;
    while (end > begin && IsSpace(text[end - 1])) --end;
    if (begin < end) sentences.push_back({begin, end});
  };
  for (size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c != '.' && c != '?' && c != '!') continue;
    size_t end = i + 1;
    while (end < n && (text[end] == '.' || text[end] == '?' || text[end] == '!')) ++end;
    while (end < n && std::string_view("\"')]").find(text[end]) != std::string_view::npos) {
      ++end;
    }
    if (end < n && !IsSpace(text[end])) continue;
    size_t next = end;
    while (next < n && IsSpace(text[next])) ++next;
    if (next < n && std::islower(static_cast<unsigned char>(text[next]))) continue;
    if (c == '.' && end == i + 1) {
      size_t word = i;
      while (word > start && !IsSpace(text[word - 1])) --word;
      if (abbreviations_.count(text.substr(word, i + 1 - word))) continue;
    }
    emit(start, end);
    start = end;
    i = end - 1;
  }
  emit(start, n);
  return sentences;
}

std::vector<std::string> SplitSentences(const TimestampedDoc &doc,
                                        const SentenceSplitter &splitter) {
  std::vector<std::string> out;
  for (const TextSpan &s : splitter.Split(doc.text)) {
    out.push_back(doc.text.substr(s.start, s.end - s.start));
  }
  return out;
}

std::vector<TextSpan> FindDateSpans(const std::string &sentence) {
  const DatePatterns &p = Patterns();
  std::vector<SalientSpan> found;
  auto add = [&](size_t start, size_t end) {
    found.push_back({start, end, SpanKind::kDate, ""});
  };
  for (std::sregex_iterator it(sentence.begin(), sentence.end(), p.month_day_year), e;
       it != e; ++it) {
    const std::smatch &m = *it;
    size_t start = m.position(0), end = start + m.length(0);
    int day = ToInt(m[2]);
    if (day >= 1 && day <= 31 && Bounded(sentence, start, end)) add(start, end);
  }
  for (std::sregex_iterator it(sentence.begin(), sentence.end(), p.day_month_year), e;
       it != e; ++it) {
    const std::smatch &m = *it;
    size_t start = m.position(0), end = start + m.length(0);
    int day = ToInt(m[1]);
    if (day >= 1 && day <= 31 && Bounded(sentence, start, end)) add(start, end);
  }
  for (std::sregex_iterator it(sentence.begin(), sentence.end(), p.numeric), e;
       it != e; ++it) {
    const std::smatch &m = *it;
    size_t start = m.position(0), end = start + m.length(0);
    int month = ToInt(m[1]), day = ToInt(m[2]);
    bool slash_around = (start > 0 && sentence[start - 1] == '/') ||
                        (end < sentence.size() && sentence[end] == '/');
    if (month >= 1 && month <= 12 && day >= 1 && day <= 31 && !slash_around &&
        Bounded(sentence, start, end)) {
      add(start, end);
    }
  }
  for (std::sregex_iterator it(sentence.begin(), sentence.end(), p.year), e; it != e;
       ++it) {
    size_t start = it->position(0), end = start + it->length(0);
    if (PlausibleBareYear(sentence, start, end)) add(start, end);
  }
  std::vector<TextSpan> spans;
  for (const SalientSpan &s : ResolveOverlaps(std::move(found))) {
    spans.push_back({s.start, s.end});
  }
  return spans;
}

std::vector<SalientSpan> ResolveOverlaps(std::vector<SalientSpan> spans) {
  std::stable_sort(spans.begin(), spans.end(),
                   [](const SalientSpan &a, const SalientSpan &b) {
                     size_t la = a.end - a.start, lb = b.end - b.start;
                     if (la != lb) return la > lb;
                     return a.start < b.start;
                   });
  std::vector<SalientSpan> kept;
  for (SalientSpan &s : spans) {
    bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const SalientSpan &k) {
      return s.start < k.end && k.start < s.end;
    });
    if (!overlaps) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const SalientSpan &a, const SalientSpan &b) {
    return a.start < b.start;
  });
  return kept;
}

std::vector<std::vector<SalientSpan>> FindSalientSpans(
    const std::vector<std::string> &sentences, EntityTagger &tagger) {
  std::vector<std::vector<TextSpan>> entities = tagger.Tag(sentences);
  if (entities.size() != sentences.size()) {
    throw RuntimeError("tagger returned " + std::to_string(entities.size()) +
                       " results for " + std::to_string(sentences.size()) +
                       " sentences");
  }
  std::vector<std::vector<SalientSpan>> out;
  out.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    const std::string &s = sentences[i];
    std::vector<SalientSpan> spans;
    for (const TextSpan &d : FindDateSpans(s)) {
      spans.push_back({d.start, d.end, SpanKind::kDate, ""});
    }
    for (const TextSpan &e : entities[i]) {
      if (e.start >= e.end || e.end > s.size()) {
        throw RuntimeError("tagger span [" + std::to_string(e.start) + "," +
                           std::to_string(e.end) + ") out of range in sentence " +
                           std::to_string(i));
      }
      spans.push_back({e.start, e.end, SpanKind::kEntity, ""});
    }
    spans = ResolveOverlaps(std::move(spans));
    for (SalientSpan &span : spans) span.surface = s.substr(span.start, span.end - span.start);
    out.push_back(std::move(spans));
  }
  return out;
}

std::vector<SalientSpan> FindSalientSpans(const std::string &sentence,
                                          EntityTagger &tagger) {
  return FindSalientSpans(std::vector<std::string>{sentence}, tagger).front();
}

MaskPolicy ParseMaskPolicy(std::string_view name) {
  if (name == "one-per-span") return MaskPolicy::kOnePerSpan;
  if (name == "random-one") return MaskPolicy::kRandomOne;
  throw ValidationError("unknown mask policy '" + std::string(name) +
                        "' (one-per-span or random-one)");
}

std::vector<MaskedExample> MakeMaskedExamples(const std::string &sentence,
                                              const std::vector<SalientSpan> &spans,
                                              int year, MaskPolicy policy,
                                              uint64_t seed) {
  std::vector<MaskedExample> out;
  if (spans.empty()) return out;
  auto mask = [&](const SalientSpan &span) {
    if (span.start >= span.end || span.end > sentence.size()) {
      throw ValidationError("span out of range for sentence");
    }
    MaskedExample ex;
    ex.input = sentence.substr(0, span.start) + std::string(kMaskLiteral) +
               sentence.substr(span.end);
    ex.target = sentence.substr(span.start, span.end - span.start);
    ex.year = year;
    ex.kind = span.kind;
    ex.span_start = span.start;
    return ex;
  };
  if (policy == MaskPolicy::kOnePerSpan) {
    for (const SalientSpan &span : spans) out.push_back(mask(span));
  } else {
    Rng rng(seed);
    out.push_back(mask(spans[rng.UniformIndex(spans.size())]));
  }
  return out;
}

bool HasTimePrefix(std::string_view input) {
  static const std::regex prefix(R"(^year: [0-9]{4} )");
  return std::regex_search(input.begin(), input.end(), prefix);
}

std::string_view StripTimePrefix(std::string_view input) {
  return HasTimePrefix(input) ? input.substr(11) : input;
}

MaskedExample ApplyTimePrefix(MaskedExample example) {
  if (HasTimePrefix(example.input)) {
    throw ValidationError("time prefix already present: '" + example.input + "'");
  }
  if (example.year < 1000 || example.year > 9999) {
    throw ValidationError("year " + std::to_string(example.year) +
                          " is not a 4-digit year");
  }
  example.input = "year: " + std::to_string(example.year) + " " + example.input;
  return example;
}

std::string Unmask(const MaskedExample &example) {
  std::string out = example.input;
  size_t pos = out.find(kMaskLiteral);
  if (pos != std::string::npos) out.replace(pos, kMaskLiteral.size(), example.target);
  return out;
}

std::vector<MaskedExample> BuildCorpus(const std::vector<TimestampedDoc> &docs,
                                       EntityTagger &tagger,
                                       const CorpusOptions &options,
                                       CorpusStats *stats) {
  CorpusStats local;
  std::vector<MaskedExample> out;
  const SentenceSplitter &splitter = SentenceSplitter::Default();
  for (const TimestampedDoc &doc : docs) {
    ++local.docs;
    std::vector<TextSpan> ranges = splitter.Split(doc.text);
    std::vector<std::string> sentences;
    for (const TextSpan &r : ranges) sentences.push_back(doc.text.substr(r.start, r.end - r.start));
    local.sentences += sentences.size();
    std::vector<std::vector<SalientSpan>> spans = FindSalientSpans(sentences, tagger);
    for (size_t i = 0; i < sentences.size(); ++i) {
      bool any_year = false, same_year = false;
      for (const TextSpan &d : FindDateSpans(sentences[i])) {
        std::string surface = sentences[i].substr(d.start, d.end - d.start);
        any_year = true;
        if (surface.find(std::to_string(doc.year)) != std::string::npos) same_year = true;
      }
      local.explicit_year_sentences += any_year;
      local.same_year_sentences += same_year;
      if (sentences[i].find(kMaskLiteral) != std::string::npos) {
        ++local.skipped_sentences;
        continue;
      }
      local.spans += spans[i].size();
      uint64_t seed = DeriveSeed(options.seed, doc.doc_id + "#" + std::to_string(ranges[i].start));
      for (MaskedExample &ex :
           MakeMaskedExamples(sentences[i], spans[i], doc.year, options.policy, seed)) {
        ex.doc_id = doc.doc_id;
        ex.sentence_offset = ranges[i].start;
        out.push_back(std::move(ex));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const MaskedExample &a, const MaskedExample &b) {
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    if (a.sentence_offset != b.sentence_offset) return a.sentence_offset < b.sentence_offset;
    return a.span_start < b.span_start;
  });
  local.examples = out.size();
  if (stats != nullptr) *stats = local;
  return out;
}

std::vector<TimestampedDoc> ParseDocsJsonl(std::string_view contents,
                                           const std::string &source,
                                           const YearRange &validity) {
  using nlohmann::json;
  static const std::regex date_re(R"(^([0-9]{4})-([0-9]{2})-([0-9]{2})$)");
  std::vector<TimestampedDoc> docs;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    TimestampedDoc doc;
    try {
      json obj = json::parse(line);
      doc.doc_id = obj.at("doc_id").get<std::string>();
      doc.date = obj.at("date").get<std::string>();
      doc.text = obj.at("text").get<std::string>();
    } catch (const json::exception &e) {
      throw ParseError(source, row, 1, e.what());
    }
    std::smatch m;
    if (!std::regex_match(doc.date, m, date_re)) {
      throw ParseError(source, row, 2, "date '" + doc.date + "' is not YYYY-MM-DD");
    }
    doc.year = std::stoi(m[1].str());
    int month = std::stoi(m[2].str()), day = std::stoi(m[3].str());
    if (month < 1 || month > 12 || day < 1 || day > 31) {
      throw ParseError(source, row, 2, "date '" + doc.date + "' is not a calendar date");
    }
    if (!validity.Contains(doc.year)) {
      throw ParseError(source, row, 2,
                       "year " + std::to_string(doc.year) + " outside " + validity.ToString());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<TimestampedDoc> LoadDocs(const std::string &path, const YearRange &validity) {
  return ParseDocsJsonl(ReadFile(path), path, validity);
}

std::string DocsToJsonl(const std::vector<TimestampedDoc> &docs) {
  std::string out;
  for (const TimestampedDoc &d : docs) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = d.doc_id;
    obj["date"] = d.date;
    obj["text"] = d.text;
    out += obj.dump() + "\n";
  }
  return out;
}

std::string ExamplesToJsonl(const std::vector<MaskedExample> &examples) {
  std::string out;
  for (const MaskedExample &ex : examples) {
    nlohmann::ordered_json obj;
    obj["input"] = ex.input;
    obj["target"] = ex.target;
    obj["year"] = ex.year;
    obj["kind"] = SpanKindName(ex.kind);
    obj["doc_id"] = ex.doc_id;
    obj["sentence_offset"] = ex.sentence_offset;
    obj["span_start"] = ex.span_start;
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<MaskedExample> ParseExamplesJsonl(std::string_view contents,
                                              const std::string &source) {
  using nlohmann::json;
  std::vector<MaskedExample> examples;
  std::istringstream in{std::string(contents)};
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      MaskedExample ex;
      ex.input = obj.at("input").get<std::string>();
      ex.target = obj.at("target").get<std::string>();
      ex.year = obj.at("year").get<int>();
      ex.kind = ParseSpanKind(obj.value("kind", "entity"));
      ex.doc_id = obj.value("doc_id", "");
      ex.sentence_offset = obj.value("sentence_offset", size_t{0});
      ex.span_start = obj.value("span_start", size_t{0});
      if (CountOccurrences(ex.input, kMaskLiteral) != 1) {
        throw ValidationError("input must contain the mask literal exactly once");
      }
      if (ex.target.empty()) throw ValidationError("empty target");
      examples.push_back(std::move(ex));
    } catch (const json::exception &e) {
      throw ParseError(source, row, 1, e.what());
    } catch (const ValidationError &e) {
      throw ParseError(source, row, 1, e.what());
    }
  }
  return examples;
}

std::vector<MaskedExample> LoadExamples(const std::string &path) {
  return ParseExamplesJsonl(ReadFile(path), path);
}

}  // namespace tprobe
