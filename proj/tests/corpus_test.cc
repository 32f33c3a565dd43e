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

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.h"
#include "tprobe/corpus.h"
#include "tprobe/tagger.h"

namespace tprobe {
namespace {

std::vector<std::string> Surfaces(const std::string &s, const std::vector<TextSpan> &spans) {
  std::vector<std::string> out;
  for (const TextSpan &t : spans) out.push_back(s.substr(t.start, t.end - t.start));
  return out;
}

TEST_CASE("sentence splitting respects abbreviations") {
  TimestampedDoc doc{"d", "2014-01-01", 2014,
                     "Dr. Smith joined Acme Inc. in May. She left! Did she return? yes."};
  std::vector<std::string> s = SplitSentences(doc);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "Dr. Smith joined Acme Inc. in May.");
  CHECK(s[1] == "She left!");
  CHECK(s[2] == "Did she return? yes.");
}

TEST_CASE("property: sentence ranges are ordered and separated by whitespace") {
  testing::Gen gen(11);
  const std::vector<std::string> pieces = {"Hello", "world.", "Mr.", "Lee", "ran!", "U.S.",
                                           "ok?", "\"Yes.\"", "and", "then", "3.5", "x"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    int n = gen.Int(0, 14);
    for (int i = 0; i < n; ++i) text += (i ? (gen.Coin(0.2) ? "  " : " ") : "") + gen.Pick(pieces);
    std::vector<TextSpan> spans = SentenceSplitter::Default().Split(text);
    size_t prev = 0;
    for (const TextSpan &sp : spans) {
      CHECK(sp.start < sp.end);
      CHECK(sp.start >= prev);
      for (size_t i = prev; i < sp.start; ++i) CHECK(std::isspace(static_cast<unsigned char>(text[i])));
      prev = sp.end;
    }
    for (size_t i = prev; i < text.size(); ++i) CHECK(std::isspace(static_cast<unsigned char>(text[i])));
  }
}

TEST_CASE("date spans cover the common written forms") {
  std::string s = "On March 3, 2014 and 5 June 2015 and 07/04/2016 she said 2017 was big.";
  CHECK(Surfaces(s, FindDateSpans(s)) ==
        std::vector<std::string>{"March 3, 2014", "5 June 2015", "07/04/2016", "2017"});
  std::string n = "It cost $2019 at 3.2019 or 12:2019 and 2019/5 and 2019.5 units.";
  CHECK(FindDateSpans(n).empty());
  CHECK(FindDateSpans("Call 13/45/2019 now.").empty());
}

TEST_CASE("overlaps resolve to the longest span, then the leftmost") {
  std::vector<SalientSpan> spans = {{0, 5, SpanKind::kEntity, ""},
                                    {3, 10, SpanKind::kEntity, ""},
                                    {12, 15, SpanKind::kDate, ""},
                                    {13, 16, SpanKind::kEntity, ""}};
  std::vector<SalientSpan> kept = ResolveOverlaps(spans);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].start == 3);
  CHECK(kept[1].start == 12);
}

TEST_CASE("one-per-span masking and unmasking round-trip") {
  GazetteerTagger tagger({"Cristiano Ronaldo", "Real Madrid", "Real"});
  std::string s = "Cristiano Ronaldo joined Real Madrid in 2009.";
  std::vector<SalientSpan> spans = FindSalientSpans(s, tagger);
  REQUIRE(spans.size() == 3);
  CHECK(spans[1].surface == "Real Madrid");
  std::vector<MaskedExample> ex = MakeMaskedExamples(s, spans, 2010, MaskPolicy::kOnePerSpan, 0);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].input == "_X_ joined Real Madrid in 2009.");
  CHECK(ex[2].target == "2009");
  CHECK(ex[2].kind == SpanKind::kDate);
  for (const MaskedExample &e : ex) {
    CHECK(Unmask(e) == s);
    CHECK(CountOccurrences(e.input, kMaskLiteral) == 1);
  }
  std::vector<MaskedExample> one = MakeMaskedExamples(s, spans, 2010, MaskPolicy::kRandomOne, 4);
  CHECK(one.size() == 1);
  CHECK(one == MakeMaskedExamples(s, spans, 2010, MaskPolicy::kRandomOne, 4));
}

TEST_CASE("time prefix is applied once") {
  MaskedExample e;
  e.input = "A plays for _X_.";
  e.year = 2014;
  MaskedExample p = ApplyTimePrefix(e);
  CHECK(p.input == "year: 2014 A plays for _X_.");
  CHECK(HasTimePrefix(p.input));
  CHECK(StripTimePrefix(p.input) == e.input);
  CHECK_THROWS_AS(ApplyTimePrefix(p), ValidationError);
}

TEST_CASE("corpus build is deterministic and counts explicit years") {
  std::vector<TimestampedDoc> docs = {
      {"a", "2014-05-01", 2014, "Ann works for Acme. In 2014 Bob joined Zed."},
      {"b", "2015-02-01", 2015, "Bob works for Zed. Nothing else happened."}};
  GazetteerTagger tagger({"Ann", "Bob", "Acme", "Zed"});
  CorpusStats stats;
  std::vector<MaskedExample> a = BuildCorpus(docs, tagger, {}, &stats);
  CHECK(stats.docs == 2);
  CHECK(stats.sentences == 4);
  CHECK(stats.explicit_year_sentences == 1);
  CHECK(stats.same_year_sentences == 1);
  CHECK(a.size() == 7);
  CHECK(a == BuildCorpus(docs, tagger, {}, nullptr));
  CHECK(ParseExamplesJsonl(ExamplesToJsonl(a), "x.jsonl") == a);
}

TEST_CASE("documents validate their dates") {
  std::string ok = R"({"doc_id":"1","date":"2014-03-02","text":"Hi."})" "\n";
  std::vector<TimestampedDoc> docs = ParseDocsJsonl(ok, "d.jsonl", {2010, 2020});
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].year == 2014);
  CHECK_THROWS_AS(ParseDocsJsonl(R"({"doc_id":"1","date":"2014-13-02","text":"x"})", "d", {2010, 2020}),
                  ParseError);
  CHECK_THROWS_AS(ParseDocsJsonl(R"({"doc_id":"1","date":"2004-01-02","text":"x"})", "d", {2010, 2020}),
                  ValidationError);
}

TEST_CASE("gazetteer matching is whole-word and longest-first") {
  GazetteerTagger tagger({"New York", "York", "Yorkshire"});
  std::string s = "New York is not Yorkshire or Yorkie.";
  CHECK(Surfaces(s, tagger.TagOne(s)) == std::vector<std::string>{"New York", "Yorkshire"});
}

TEST_CASE("code point offsets convert both ways") {
  std::string s = "São Paulo";
  CHECK(BytesToCodePoints(s, 4) == 3);
  CHECK(CodePointsToBytes(s, 3) == 4);
  for (size_t cp = 0; cp <= 9; ++cp) CHECK(BytesToCodePoints(s, CodePointsToBytes(s, cp)) == cp);
}

TEST_CASE("tagger protocol served in-process") {
  GazetteerTagger tagger({"São Paulo"});
  std::istringstream in(R"({"id":1,"sentence":"I love São Paulo."})" "\n");
  std::ostringstream out;
  CHECK(ServeTagger(tagger, in, out) == 1);
  auto j = nlohmann::json::parse(out.str());
  CHECK(j["id"] == 1);
  CHECK(j["spans"][0]["start"] == 7);
  CHECK(j["spans"][0]["end"] == 16);
}

TEST_CASE("external tagger process matches the builtin one") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "tprobe_tagger_test";
  fs::create_directories(dir);
  WriteFile((dir / "names.txt").string(), "São Paulo\nAcme\n");
  SubprocessTagger remote(testing::CliPath() + " serve-tagger --gazetteer " +
                          (dir / "names.txt").string());
  GazetteerTagger local({"São Paulo", "Acme"});
  std::vector<std::string> sentences = {"Acme moved to São Paulo.", "Nothing here.",
                                        "São Paulo, São Paulo and Acme."};
  CHECK(remote.Tag(sentences) == local.Tag(sentences));
}

}  // namespace
}  // namespace tprobe
