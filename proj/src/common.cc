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

#include "tprobe/common.h"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tprobe {

ParseError::ParseError(const std::string &source, int row, int column,
                       const std::string &what)
    : ValidationError(source + ":" + std::to_string(row) + ":" +
                      std::to_string(column) + ": " + what),
      row_(row),
      column_(column) {}

std::vector<int> YearRange::Years() const {
  std::vector<int> years;
  for (int y = first; y <= last; ++y) years.push_back(y);
  return years;
}

std::string YearRange::ToString() const {
  return std::to_string(first) + ":" + std::to_string(last);
}

YearRange YearRange::Parse(std::string_view text) {
  size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    int year = ParseInt(text, "year range");
    return {year, year};
  }
  YearRange range{ParseInt(text.substr(0, colon), "range start"),
                  ParseInt(text.substr(colon + 1), "range end")};
  if (range.first > range.last) {
    throw ValidationError("year range " + std::string(text) +
                          " has start after end");
  }
  return range;
}

uint64_t Rng::UniformIndex(uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformIndex(0)");
  // Rejection sampling removes modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t StableHash(std::string_view data, uint64_t seed) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HexId(uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

uint64_t DeriveSeed(uint64_t seed, std::string_view label) {
  // splitmix64 finalizer over the label hash.
  uint64_t z = StableHash(label) ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      return parts;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view Trim(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

std::string Join(const std::vector<std::string> &parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool StartsWith(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

size_t CountOccurrences(std::string_view text, std::string_view needle) {
  if (needle.empty()) return 0;
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int ParseInt(std::string_view text, const std::string &what) {
  text = Trim(text);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(what + ": expected an integer, got '" +
                          std::string(text) + "'");
  }
  return value;
}

double ParseDouble(std::string_view text, const std::string &what) {
  std::string s(Trim(text));
  char *end = nullptr;
  double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ValidationError(what + ": expected a number, got '" + s + "'");
  }
  return value;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw RuntimeError("write failed for " + path);
}

std::vector<std::string> ReadList(const std::string &path) {
  std::vector<std::string> items;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    items.emplace_back(t);
  }
  return items;
}

std::string DataDir() {
  if (const char *env = std::getenv("TPROBE_DATA_DIR"); env && *env) return env;
  return TPROBE_DEFAULT_DATA_DIR;
}

std::string DataPath(std::string_view name) {
  return DataDir() + "/" + std::string(name);
}

namespace {
std::atomic<bool> warnings_silenced{false};
}  // namespace

void Warn(const std::string &message) {
  if (!warnings_silenced) std::cerr << "warning: " << message << "\n";
}

void SetWarningsSilenced(bool silenced) { warnings_silenced = silenced; }

}  // namespace tprobe
