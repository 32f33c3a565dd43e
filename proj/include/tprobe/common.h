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

#ifndef TPROBE_COMMON_H_
#define TPROBE_COMMON_H_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tprobe {

// Sentinel that replaces the masked span in every probe and training input.
inline constexpr std::string_view kMaskLiteral = "_X_";

// Bad input: malformed files, invalid configuration, violated preconditions.
// The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file row that could not be parsed. Row and column are 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string &source, int row, int column,
             const std::string &what);

  int row() const { return row_; }
  int column() const { return column_; }

 private:
  int row_;
  int column_;
};

// Failures while running a stage (I/O, subprocess, model). Exit code 2.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inclusive range of calendar years, written "2010:2020" on the command line.
struct YearRange {
  int first = 0;
  int last = 0;

  bool Contains(int year) const { return year >= first && year <= last; }
  int size() const { return last - first + 1; }
  std::vector<int> Years() const;
  std::string ToString() const;

  // "2010:2020" or a single year "2019".
  static YearRange Parse(std::string_view text);

  friend bool operator==(const YearRange &, const YearRange &) = default;
};

// Seeded generator with distributions defined here rather than by the
// standard library, so draws are identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);
  // Uniform real in [0, 1) with 53 bits of precision.
  double Uniform01();
  bool Bernoulli(double p) { return Uniform01() < p; }
  uint64_t Next() { return engine_(); }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a. Used for stable ids and input hashes in manifests.
uint64_t StableHash(std::string_view data, uint64_t seed = 0xcbf29ce484222325ULL);
std::string HexId(uint64_t value);

// Derives an independent stream seed, e.g. one per worker or per stage.
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

std::vector<std::string> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);
bool StartsWith(std::string_view text, std::string_view prefix);
size_t CountOccurrences(std::string_view text, std::string_view needle);
std::string AsciiLower(std::string_view text);
int ParseInt(std::string_view text, const std::string &what);
double ParseDouble(std::string_view text, const std::string &what);

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);
// Reads a newline-delimited list, skipping blank lines and '#' comments.
std::vector<std::string> ReadList(const std::string &path);

// Directory holding shipped data files. $TPROBE_DATA_DIR overrides the
// compiled-in default.
std::string DataDir();
std::string DataPath(std::string_view name);

// Writes "warning: <message>" to stderr unless warnings are silenced.
void Warn(const std::string &message);
void SetWarningsSilenced(bool silenced);

}  // namespace tprobe

#endif  // TPROBE_COMMON_H_
