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

#include "tprobe/sampling.h"

#include <algorithm>

namespace tprobe {

VectorStream::VectorStream(std::vector<MaskedExample> examples, bool cycle)
    : examples_(std::move(examples)), cycle_(cycle) {}

std::optional<MaskedExample> VectorStream::Next() {
  if (examples_.empty()) return std::nullopt;
  if (pos_ == examples_.size()) {
    if (!cycle_) return std::nullopt;
    pos_ = 0;
  }
  return examples_[pos_++];
}

void MixtureSpec::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("mixture alpha must be in [0, 1], got " +
                          std::to_string(alpha));
  }
  if (new_slice.empty() || old_slices.empty()) {
    throw ValidationError("mixture needs non-empty new and old slices");
  }
  for (int y : new_slice) {
    if (old_slices.count(y)) {
      throw ValidationError("year " + std::to_string(y) +
                            " is in both the new and the old slice");
    }
  }
}

SampledStream::SampledStream(const std::vector<MaskedExample> &examples,
                             SampleMode mode, uint64_t seed)
    : mode_(std::move(mode)), rng_(seed) {
  for (const MaskedExample &ex : examples) by_year_[ex.year].push_back(&ex);
  switch (mode_.kind) {
    case SampleMode::kUniformByYear: {
      std::set<int> all;
      for (const auto &[year, list] : by_year_) all.insert(year);
      primary_ = CollectSlice(all, "stream");
      break;
    }
    case SampleMode::kSingleYear:
      primary_ = CollectSlice({mode_.year}, "year slice");
      break;
    case SampleMode::kMixture:
      mode_.mixture.Validate();
      primary_ = CollectSlice(mode_.mixture.new_slice, "new slice");
      old_ = CollectSlice(mode_.mixture.old_slices, "old slice");
      break;
  }
}

SampledStream::Slice SampledStream::CollectSlice(const std::set<int> &years,
                                                 const char *what) const {
  Slice slice;
  for (int y : years) {
    auto it = by_year_.find(y);
    if (it != by_year_.end() && !it->second.empty()) slice.push_back(it->second);
  }
  if (slice.empty()) {
    std::string listed;
    for (int y : years) listed += (listed.empty() ? "" : ",") + std::to_string(y);
    throw ValidationError(std::string(what) + " has no examples (years " +
                          listed + ")");
  }
  return slice;
}

const MaskedExample &SampledStream::DrawFrom(const Slice &slice) {
  const auto &year = slice[rng_.UniformIndex(slice.size())];
  return *year[rng_.UniformIndex(year.size())];
}

std::optional<MaskedExample> SampledStream::Next() {
  if (mode_.kind != SampleMode::kMixture) return DrawFrom(primary_);
  // alpha of exactly 0 or 1 never consults the other slice.
  last_from_new_ = rng_.Uniform01() < mode_.mixture.alpha;
  return DrawFrom(last_from_new_ ? primary_ : old_);
}

std::optional<MaskedExample> TimePrefixStream::Next() {
  std::optional<MaskedExample> ex = inner_.Next();
  if (ex) *ex = ApplyTimePrefix(std::move(*ex));
  return ex;
}

MixedStream::MixedStream(ExampleStream &corpus, ExampleStream &probes,
                         int n_corpus, int n_probe)
    : corpus_(corpus), probes_(probes), n_corpus_(n_corpus), n_probe_(n_probe) {
  if (n_corpus < 1 || n_probe < 1) {
    throw ValidationError("mixing ratio components must be >= 1");
  }
}

std::optional<MaskedExample> MixedStream::Next() {
  long phase = position_ % (n_corpus_ + n_probe_);
  ++position_;
  last_was_probe_ = phase >= n_corpus_;
  std::optional<MaskedExample> ex = last_was_probe_ ? probes_.Next() : corpus_.Next();
  if (!ex) {
    throw RuntimeError(std::string(last_was_probe_ ? "probe" : "corpus") +
                       " stream exhausted after " + std::to_string(position_ - 1) +
                       " items");
  }
  return ex;
}

std::vector<MaskedExample> QueriesToExamples(const std::vector<ClozeQuery> &queries) {
  std::vector<MaskedExample> out;
  for (const ClozeQuery &q : queries) {
    for (const std::string &answer : q.answers) {
      MaskedExample ex;
      ex.input = q.text;
      ex.target = answer;
      ex.year = q.year;
      ex.kind = SpanKind::kEntity;
      ex.doc_id = q.id;
      ex.span_start = q.text.find(kMaskLiteral);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

}  // namespace tprobe
