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

// Training streams over masked examples: year-uniform, single-year and
// alpha-mixture sampling, plus the fixed-ratio interleave with probe data.

#ifndef TPROBE_SAMPLING_H_
#define TPROBE_SAMPLING_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "tprobe/corpus.h"
#include "tprobe/templama.h"

namespace tprobe {

// Single-consumer source of examples. Next() returns nullopt once a finite
// stream is exhausted; sampled streams never end.
class ExampleStream {
 public:
  virtual ~ExampleStream() = default;
  virtual std::optional<MaskedExample> Next() = 0;
};

// Walks a vector once, or forever when `cycle` is set.
class VectorStream : public ExampleStream {
 public:
  explicit VectorStream(std::vector<MaskedExample> examples, bool cycle = false);
  std::optional<MaskedExample> Next() override;

 private:
  std::vector<MaskedExample> examples_;
  bool cycle_;
  size_t pos_ = 0;
};

struct MixtureSpec {
  double alpha = 0.0;
  std::set<int> new_slice;
  std::set<int> old_slices;

  // alpha in [0, 1], both slices non-empty and disjoint.
  void Validate() const;
};

struct SampleMode {
  enum Kind { kUniformByYear, kSingleYear, kMixture };
  Kind kind = kUniformByYear;
  int year = 0;         // kSingleYear
  MixtureSpec mixture;  // kMixture

  static SampleMode UniformByYear() { return {}; }
  static SampleMode SingleYear(int year) { return {kSingleYear, year, {}}; }
  static SampleMode Mixture(MixtureSpec spec) {
    return {kMixture, 0, std::move(spec)};
  }
};

// Infinite seeded sampler. Uniform-by-year draws a year uniformly among the
// years present, then an example uniformly within it. A mixture draws from
// the new slice with probability alpha and from the old slices otherwise,
// each year-uniform internally. Throws ValidationError if a requested slice
// has no examples.
class SampledStream : public ExampleStream {
 public:
  // Keeps pointers into `examples`, which must outlive the stream.
  SampledStream(const std::vector<MaskedExample> &examples, SampleMode mode,
                uint64_t seed);
  SampledStream(std::vector<MaskedExample> &&, SampleMode, uint64_t) = delete;
  std::optional<MaskedExample> Next() override;

  // Whether the last draw came from the new slice (mixture mode).
  bool last_from_new() const { return last_from_new_; }

 private:
  using Slice = std::vector<std::vector<const MaskedExample *>>;
  Slice CollectSlice(const std::set<int> &years, const char *what) const;
  const MaskedExample &DrawFrom(const Slice &slice);

  std::map<int, std::vector<const MaskedExample *>> by_year_;
  SampleMode mode_;
  Rng rng_;
  Slice primary_;
  Slice old_;
  bool last_from_new_ = false;
};

// Adds the "year: YYYY " prefix to everything drawn from `inner`.
class TimePrefixStream : public ExampleStream {
 public:
  explicit TimePrefixStream(ExampleStream &inner) : inner_(inner) {}
  std::optional<MaskedExample> Next() override;

 private:
  ExampleStream &inner_;
};

// Deterministic interleave: n_corpus corpus items, then n_probe probe items,
// repeated. Throws RuntimeError when either stream runs dry.
class MixedStream : public ExampleStream {
 public:
  MixedStream(ExampleStream &corpus, ExampleStream &probes, int n_corpus = 1000,
              int n_probe = 1);
  std::optional<MaskedExample> Next() override;

  // True if the last item came from the probe stream.
  bool last_was_probe() const { return last_was_probe_; }

 private:
  ExampleStream &corpus_;
  ExampleStream &probes_;
  int n_corpus_;
  int n_probe_;
  long position_ = 0;
  bool last_was_probe_ = false;
};

// One training example per (query, answer): the query text as input and the
// answer as target.
std::vector<MaskedExample> QueriesToExamples(const std::vector<ClozeQuery> &queries);

}  // namespace tprobe

#endif  // TPROBE_SAMPLING_H_
