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

#ifndef SPIC_DIFFUSION_CONFIG_HPP_
#define SPIC_DIFFUSION_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spic/diffusion/sampler.hpp"
#include "spic/diffusion/trainer.hpp"
#include "spic/diffusion/unet.hpp"

namespace spic {

// Human-readable `key = value` configuration. `[section]` lines prefix the
// following keys with `section.`; `#` starts a comment. Lists are comma
// separated. Every key must be consumed by some reader, otherwise
// CheckAllConsumed() throws.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::string& path);

  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> GetString(const std::string& key);
  std::optional<long long> GetInt(const std::string& key);
  std::optional<double> GetDouble(const std::string& key);
  std::optional<bool> GetBool(const std::string& key);
  std::optional<std::vector<int>> GetIntList(const std::string& key);

  void CheckAllConsumed() const;

 private:
  const std::string* Find(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

struct ScheduleConfig {
  int steps = 1000;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  bool operator==(const ScheduleConfig&) const = default;
};

inline NoiseSchedule MakeSchedule(const ScheduleConfig& cfg) {
  return MakeSchedule(cfg.steps, cfg.beta_start, cfg.beta_end);
}

// Readers for the `denoiser.`, `schedule.`, `sampler.` and `train.` keys.
void ReadDenoiserConfig(KeyValueConfig& kv, DenoiserConfig& cfg);
void ReadScheduleConfig(KeyValueConfig& kv, ScheduleConfig& cfg);
void ReadSamplerConfig(KeyValueConfig& kv, SamplerConfig& cfg);
void ReadTrainConfig(KeyValueConfig& kv, TrainConfig& cfg);

}  // namespace spic

#endif  // SPIC_DIFFUSION_CONFIG_HPP_
