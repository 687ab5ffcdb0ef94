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

#include "spic/diffusion/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spic/core/error.hpp"

namespace spic {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename V>
V ParseNumber(const std::string& key, const std::string& text) {
  V v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + text +
                          "'");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidArgument("config line " + std::to_string(lineno) +
                              ": malformed section");
      }
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": empty key");
    }
    if (!section.empty()) key = section + "." + key;
    if (kv.Has(key)) throw InvalidArgument("config: duplicate key '" + key + "'");
    kv.Set(key, Trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  values_[key] = value;
  consumed_.erase(key);
}

const std::string* KeyValueConfig::Find(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

std::optional<std::string> KeyValueConfig::GetString(const std::string& key) {
  const std::string* v = Find(key);
  if (!v) return std::nullopt;
  return *v;
}

std::optional<long long> KeyValueConfig::GetInt(const std::string& key) {
  const std::string* v = Find(key);
  if (!v) return std::nullopt;
  return ParseNumber<long long>(key, *v);
}

std::optional<double> KeyValueConfig::GetDouble(const std::string& key) {
  const std::string* v = Find(key);
  if (!v) return std::nullopt;
  return ParseNumber<double>(key, *v);
}

std::optional<bool> KeyValueConfig::GetBool(const std::string& key) {
  const std::string* v = Find(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw InvalidArgument("config key '" + key + "': expected true/false");
}

std::optional<std::vector<int>> KeyValueConfig::GetIntList(
    const std::string& key) {
  const std::string* v = Find(key);
  if (!v) return std::nullopt;
  std::vector<int> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    out.push_back(ParseNumber<int>(key, item));
  }
  return out;
}

void KeyValueConfig::CheckAllConsumed() const {
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
}

void ReadDenoiserConfig(KeyValueConfig& kv, DenoiserConfig& cfg) {
  if (auto v = kv.GetInt("denoiser.base_channels")) cfg.base_channels = *v;
  if (auto v = kv.GetIntList("denoiser.channel_mult")) cfg.channel_mult = *v;
  if (auto v = kv.GetInt("denoiser.num_res_blocks")) cfg.num_res_blocks = *v;
  if (auto v = kv.GetIntList("denoiser.attention_levels")) {
    cfg.attention_levels = *v;
  }
  if (auto v = kv.GetInt("denoiser.norm_groups")) cfg.norm_groups = *v;
  if (auto v = kv.GetInt("denoiser.spade_hidden")) cfg.spade_hidden = *v;
  if (auto v = kv.GetInt("denoiser.num_classes")) cfg.num_classes = *v;
  if (auto v = kv.GetInt("denoiser.init_seed")) cfg.init_seed = *v;
  if (auto v = kv.GetBool("denoiser.zero_init_output")) {
    cfg.zero_init_output = *v;
  }
  cfg.Validate();
}

void ReadScheduleConfig(KeyValueConfig& kv, ScheduleConfig& cfg) {
  if (auto v = kv.GetInt("schedule.steps")) cfg.steps = *v;
  if (auto v = kv.GetDouble("schedule.beta_start")) cfg.beta_start = *v;
  if (auto v = kv.GetDouble("schedule.beta_end")) cfg.beta_end = *v;
}

void ReadSamplerConfig(KeyValueConfig& kv, SamplerConfig& cfg) {
  if (auto v = kv.GetInt("sampler.steps")) cfg.steps = *v;
  if (auto v = kv.GetInt("sampler.seed")) cfg.seed = *v;
  if (auto v = kv.GetBool("sampler.clip_denoised")) cfg.clip_denoised = *v;
  SPIC_REQUIRE(cfg.steps >= 1, "sampler.steps must be >= 1");
}

void ReadTrainConfig(KeyValueConfig& kv, TrainConfig& cfg) {
  if (auto v = kv.GetInt("train.steps")) cfg.steps = *v;
  if (auto v = kv.GetInt("train.batch_size")) cfg.batch_size = *v;
  if (auto v = kv.GetDouble("train.learning_rate")) cfg.learning_rate = *v;
  if (auto v = kv.GetInt("train.crop_height")) cfg.crop_height = *v;
  if (auto v = kv.GetInt("train.crop_width")) cfg.crop_width = *v;
  if (auto v = kv.GetDouble("train.grad_clip")) cfg.grad_clip = *v;
  if (auto v = kv.GetInt("train.seed")) cfg.seed = *v;
  if (auto v = kv.GetInt("train.coarse_quality")) cfg.coarse_quality = *v;
  SPIC_REQUIRE(cfg.steps >= 0 && cfg.batch_size >= 1,
               "train.steps must be >= 0 and train.batch_size >= 1");
}

}  // namespace spic
