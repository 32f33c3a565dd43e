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

#ifndef TPROBE_TAGGER_H_
#define TPROBE_TAGGER_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tprobe/subprocess.h"

namespace tprobe {

// Half-open byte range [start, end) into a sentence.
struct TextSpan {
  size_t start = 0;
  size_t end = 0;

  friend bool operator==(const TextSpan &, const TextSpan &) = default;
};

// Named-entity tagger. Tag() returns one span list per input sentence.
class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  virtual std::vector<std::vector<TextSpan>> Tag(
      std::span<const std::string> sentences) = 0;
};

// Longest-match lookup of a fixed name list on word boundaries.
class GazetteerTagger : public EntityTagger {
 public:
  explicit GazetteerTagger(const std::vector<std::string> &names,
                           bool case_sensitive = true);
  static std::unique_ptr<GazetteerTagger> FromFile(const std::string &path,
                                                   bool case_sensitive = true);

  std::vector<std::vector<TextSpan>> Tag(
      std::span<const std::string> sentences) override;
  std::vector<TextSpan> TagOne(const std::string &sentence) const;

  size_t size() const { return size_; }

 private:
  bool case_sensitive_;
  size_t size_ = 0;
  // First byte of an entry -> entries, longest first.
  std::map<char, std::vector<std::string>> by_first_;
};

// Runs an external tagger speaking newline-delimited JSON:
//   request  {"id": N, "sentence": "..."}
//   response {"id": N, "spans": [{"start": s, "end": e}, ...]}
// Offsets on the wire count Unicode code points.
class SubprocessTagger : public EntityTagger {
 public:
  explicit SubprocessTagger(const std::string &command);

  std::vector<std::vector<TextSpan>> Tag(
      std::span<const std::string> sentences) override;

 private:
  Subprocess process_;
  long next_id_ = 0;
};

// Server side of the protocol above, used by `tprobe serve-tagger`.
// Returns the number of requests answered.
size_t ServeTagger(EntityTagger &tagger, std::istream &in, std::ostream &out);

// Builds a tagger from a spec: "builtin:gazetteer=FILE" or "cmd:COMMAND".
std::unique_ptr<EntityTagger> MakeTagger(const std::string &spec);

// Byte offset <-> code point offset within UTF-8 text.
size_t BytesToCodePoints(const std::string &text, size_t byte_offset);
size_t CodePointsToBytes(const std::string &text, size_t code_points);

}  // namespace tprobe

#endif  // TPROBE_TAGGER_H_
