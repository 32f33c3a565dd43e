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

#ifndef TPROBE_SUBPROCESS_H_
#define TPROBE_SUBPROCESS_H_

#include <sys/types.h>

#include <string>

namespace tprobe {

// A child process started through /bin/sh with line-oriented pipes on its
// stdin and stdout. Closing stdin and reaping happen in the destructor.
class Subprocess {
 public:
  explicit Subprocess(const std::string &command);
  ~Subprocess();

  Subprocess(const Subprocess &) = delete;
  Subprocess &operator=(const Subprocess &) = delete;

  // Writes one line (a trailing newline is added).
  void WriteLine(const std::string &line);
  // Reads one line without its newline. Throws RuntimeError on EOF.
  std::string ReadLine();

  const std::string &command() const { return command_; }

 private:
  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace tprobe

#endif  // TPROBE_SUBPROCESS_H_
