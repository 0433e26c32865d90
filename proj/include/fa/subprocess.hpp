// Copyright 2026 The falsealarm Authors.
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

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace fa {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or on timeout
  bool timed_out = false;
  std::string standard_output;
  std::string standard_error;
};

/// Runs argv[0] (PATH lookup) in its own process group with stdin closed.
/// The whole group is killed once `timeout` elapses. Throws IoError if the
/// process cannot be started.
ProcessResult RunProcess(const std::vector<std::string>& argv, std::chrono::duration<double> timeout);

/// Unique scratch directory removed (recursively) on destruction.
class TempDir {
 public:
  explicit TempDir(const std::filesystem::path& parent, const std::string& prefix = "fa-");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Path next to `target` that is unique to this process and call, used as
/// the write side of create-then-rename.
std::filesystem::path UniqueSiblingPath(const std::filesystem::path& target, const std::string& tag);

}  // namespace fa
