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

#include "tprobe/tagger.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "tprobe/common.h"

namespace tprobe {

namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) ||
         (static_cast<unsigned char>(c) & 0x80);
}

char Fold(char c, bool case_sensitive) {
  return case_sensitive ? c
                        : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

}  // namespace

GazetteerTagger::GazetteerTagger(const std::vector<std::string> &names,
                                 bool case_sensitive)
    : case_sensitive_(case_sensitive) {
  for (const std::string &raw : names) {
    std::string name(Trim(raw));
    if (name.empty()) continue;
    if (!case_sensitive_) name = AsciiLower(name);
    auto &bucket = by_first_[name.front()];
    if (std::find(bucket.begin(), bucket.end(), name) == bucket.end()) {
      bucket.push_back(std::move(name));
      ++size_;
    }
  }
  for (auto &[c, bucket] : by_first_) {
    std::stable_sort(bucket.begin(), bucket.end(),
                     [](const std::string &a, const std::string &b) {
                       if (a.size() != b.size()) return a.size() > b.size();
                       return a < b;
                     });
  }
}

std::unique_ptr<GazetteerTagger> GazetteerTagger::FromFile(const std::string &path,
                                                           bool case_sensitive) {
  return std::make_unique<GazetteerTagger>(ReadList(path), case_sensitive);
}

std::vector<TextSpan> GazetteerTagger::TagOne(const std::string &sentence) const {
  std::vector<TextSpan> spans;
  size_t pos = 0;
  while (pos < sentence.size()) {
    bool matched = false;
    bool at_boundary = pos == 0 || !IsWordChar(sentence[pos - 1]);
    auto bucket = by_first_.find(Fold(sentence[pos], case_sensitive_));
    if (bucket != by_first_.end()) {
      for (const std::string &name : bucket->second) {
        if (pos + name.size() > sentence.size()) continue;
        if (IsWordChar(name.front()) && !at_boundary) continue;
        bool equal = true;
        for (size_t i = 0; i < name.size() && equal; ++i) {
          equal = Fold(sentence[pos + i], case_sensitive_) == name[i];
        }
        if (!equal) continue;
        size_t end = pos + name.size();
        if (IsWordChar(name.back()) && end < sentence.size() &&
            IsWordChar(sentence[end])) {
          continue;
        }
        spans.push_back({pos, end});
        pos = end;
        matched = true;
        break;
      }
    }
    if (!matched) ++pos;
  }
  return spans;
}

std::vector<std::vector<TextSpan>> GazetteerTagger::Tag(
    std::span<const std::string> sentences) {
  std::vector<std::vector<TextSpan>> out;
  out.reserve(sentences.size());
  for (const std::string &s : sentences) out.push_back(TagOne(s));
  return out;
}

size_t BytesToCodePoints(const std::string &text, size_t byte_offset) {
  size_t count = 0;
  for (size_t i = 0; i < byte_offset && i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++count;
  }
  return count;
}

size_t CodePointsToBytes(const std::string &text, size_t code_points) {
  size_t seen = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      if (seen == code_points) return i;
      ++seen;
    }
  }
  if (seen == code_points) return text.size();
  throw ValidationError("code point offset " + std::to_string(code_points) +
                        " is past the end of the sentence");
}

SubprocessTagger::SubprocessTagger(const std::string &command) : process_(command) {}

std::vector<std::vector<TextSpan>> SubprocessTagger::Tag(
    std::span<const std::string> sentences) {
  using nlohmann::json;
  std::vector<std::vector<TextSpan>> out;
  for (const std::string &sentence : sentences) {
    long id = next_id_++;
    try {
      process_.WriteLine(json{{"id", id}, {"sentence", sentence}}.dump());
      json response = json::parse(process_.ReadLine());
      if (response.at("id").get<long>() != id) {
        throw RuntimeError("response id mismatch");
      }
      std::vector<TextSpan> spans;
      for (const json &s : response.at("spans")) {
        TextSpan span{CodePointsToBytes(sentence, s.at("start").get<size_t>()),
                      CodePointsToBytes(sentence, s.at("end").get<size_t>())};
        if (span.start >= span.end) throw RuntimeError("empty span");
        spans.push_back(span);
      }
      out.push_back(std::move(spans));
    } catch (const std::exception &e) {
      throw RuntimeError("tagger '" + process_.command() + "' failed on sentence " +
                         std::to_string(id) + ": " + e.what());
    }
  }
  return out;
}

size_t ServeTagger(EntityTagger &tagger, std::istream &in, std::ostream &out) {
  using nlohmann::json;
  size_t served = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    json request = json::parse(line);
    std::string sentence = request.at("sentence").get<std::string>();
    std::vector<std::string> batch{sentence};
    json spans = json::array();
    std::vector<std::vector<TextSpan>> tagged = tagger.Tag(batch);
    for (const TextSpan &s : tagged.front()) {
      spans.push_back({{"start", BytesToCodePoints(sentence, s.start)},
                       {"end", BytesToCodePoints(sentence, s.end)}});
    }
    out << json{{"id", request.at("id")}, {"spans", spans}}.dump() << "\n";
    out.flush();
    ++served;
  }
  return served;
}

std::unique_ptr<EntityTagger> MakeTagger(const std::string &spec) {
  if (StartsWith(spec, "builtin:gazetteer=")) {
    return GazetteerTagger::FromFile(spec.substr(18), true);
  }
  if (StartsWith(spec, "builtin:gazetteer-nocase=")) {
    return GazetteerTagger::FromFile(spec.substr(25), false);
  }
  if (StartsWith(spec, "cmd:")) return std::make_unique<SubprocessTagger>(spec.substr(4));
  throw ValidationError("unknown tagger '" + spec +
                        "' (want builtin:gazetteer=FILE or cmd:COMMAND)");
}

}  // namespace tprobe
