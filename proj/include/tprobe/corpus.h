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

// Turns dated documents into salient-span-masked examples: sentence
// splitting, date and entity spans, masking and the time prefix.

#ifndef TPROBE_CORPUS_H_
#define TPROBE_CORPUS_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tprobe/common.h"
#include "tprobe/tagger.h"

namespace tprobe {

struct TimestampedDoc {
  std::string doc_id;
  std::string date;  // YYYY-MM-DD
  int year = 0;
  std::string text;
};

enum class SpanKind { kEntity, kDate };

std::string_view SpanKindName(SpanKind kind);
SpanKind ParseSpanKind(std::string_view name);

struct SalientSpan {
  size_t start = 0;
  size_t end = 0;
  SpanKind kind = SpanKind::kEntity;
  std::string surface;

  friend bool operator==(const SalientSpan &, const SalientSpan &) = default;
};

struct MaskedExample {
  std::string input;   // sentence with the span replaced by the mask literal
  std::string target;  // the removed span
  int year = 0;
  SpanKind kind = SpanKind::kEntity;
  std::string doc_id;
  size_t sentence_offset = 0;  // byte offset of the sentence in its document
  size_t span_start = 0;       // byte offset of the span in its sentence

  friend bool operator==(const MaskedExample &, const MaskedExample &) = default;
};

// Rule-based splitter: breaks after . ? ! (plus closing quotes or brackets)
// when followed by whitespace and a non-lowercase character, unless the
// token ending in '.' is a listed abbreviation.
class SentenceSplitter {
 public:
  explicit SentenceSplitter(std::vector<std::string> abbreviations);
  // Uses data/abbreviations.txt, or a small built-in list if it is missing.
  static const SentenceSplitter &Default();

  // Sentence byte ranges, trimmed of surrounding whitespace. Text between
  // consecutive ranges is whitespace only.
  std::vector<TextSpan> Split(std::string_view text) const;

 private:
  std::set<std::string, std::less<>> abbreviations_;
};

std::vector<std::string> SplitSentences(const TimestampedDoc &doc,
                                        const SentenceSplitter &splitter =
                                            SentenceSplitter::Default());

// Date mentions: bare years 1900-2099, "January 5, 2014", "5 January 2014"
// and "01/05/2014". Overlapping matches keep the longest.
std::vector<TextSpan> FindDateSpans(const std::string &sentence);

// Drops overlaps: longest first, ties to the leftmost, then sorts by start.
std::vector<SalientSpan> ResolveOverlaps(std::vector<SalientSpan> spans);

// Dates plus tagger entities, overlaps resolved.
std::vector<SalientSpan> FindSalientSpans(const std::string &sentence,
                                          EntityTagger &tagger);
// Batched variant: one tagger call for all sentences.
std::vector<std::vector<SalientSpan>> FindSalientSpans(
    const std::vector<std::string> &sentences, EntityTagger &tagger);

enum class MaskPolicy { kOnePerSpan, kRandomOne };
MaskPolicy ParseMaskPolicy(std::string_view name);

std::vector<MaskedExample> MakeMaskedExamples(const std::string &sentence,
                                              const std::vector<SalientSpan> &spans,
                                              int year, MaskPolicy policy,
                                              uint64_t seed);

// "year: 2014 " + input. Throws ValidationError if a prefix is present.
MaskedExample ApplyTimePrefix(MaskedExample example);
bool HasTimePrefix(std::string_view input);
// Input without a leading "year: YYYY " prefix.
std::string_view StripTimePrefix(std::string_view input);

// Puts the target back in place of the mask literal.
std::string Unmask(const MaskedExample &example);

struct CorpusOptions {
  MaskPolicy policy = MaskPolicy::kOnePerSpan;
  uint64_t seed = 0;
};

struct CorpusStats {
  size_t docs = 0;
  size_t sentences = 0;
  size_t spans = 0;
  size_t examples = 0;
  // Sentences already containing the mask literal; they cannot be masked.
  size_t skipped_sentences = 0;
  // Sentences mentioning any year, and the document's own year.
  size_t explicit_year_sentences = 0;
  size_t same_year_sentences = 0;
};

// Examples are sorted by (doc_id, sentence_offset, span_start) so the output
// does not depend on processing order.
std::vector<MaskedExample> BuildCorpus(const std::vector<TimestampedDoc> &docs,
                                       EntityTagger &tagger,
                                       const CorpusOptions &options,
                                       CorpusStats *stats = nullptr);

// {doc_id, date: "YYYY-MM-DD", text}; years outside `validity` are rejected.
std::vector<TimestampedDoc> ParseDocsJsonl(std::string_view contents,
                                           const std::string &source,
                                           const YearRange &validity);
std::vector<TimestampedDoc> LoadDocs(const std::string &path,
                                     const YearRange &validity);
std::string DocsToJsonl(const std::vector<TimestampedDoc> &docs);

// {input, target, year, kind, doc_id}
std::string ExamplesToJsonl(const std::vector<MaskedExample> &examples);
std::vector<MaskedExample> ParseExamplesJsonl(std::string_view contents,
                                              const std::string &source);
std::vector<MaskedExample> LoadExamples(const std::string &path);

}  // namespace tprobe

#endif  // TPROBE_CORPUS_H_
