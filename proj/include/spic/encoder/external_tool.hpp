/* Copyright 2026 The SPIC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SPIC_ENCODER_EXTERNAL_TOOL_HPP_
#define SPIC_ENCODER_EXTERNAL_TOOL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spic {

// Executable names for the optional external codecs. Defaults come from the
// environment (SPIC_FLIF, SPIC_BPGENC, SPIC_BPGDEC) and fall back to the
// plain names resolved through PATH.
struct ExternalTools {
  std::string flif;
  std::string bpgenc;
  std::string bpgdec;

  static ExternalTools FromEnvironment();
};

// True if `program` resolves to an executable (absolute path or PATH entry).
bool ToolAvailable(const std::string& program);

// Runs `argv` (argv[0] looked up in PATH) with stdio discarded. Throws
// ToolUnavailableError when the program cannot be started or exits non-zero.
void RunTool(const std::vector<std::string>& argv);

// Private scratch directory removed on destruction, one per adapter call.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    const std::vector<std::uint8_t>& bytes);

}  // namespace spic

#endif  // SPIC_ENCODER_EXTERNAL_TOOL_HPP_
