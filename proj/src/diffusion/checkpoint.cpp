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

#include "spic/diffusion/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "json.hpp"
#include "spic/core/error.hpp"
#include "spic/encoder/external_tool.hpp"

namespace spic {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <typename V>
void Append(std::vector<std::uint8_t>& out, V v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(V));
}

template <typename V>
V Read(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (bytes.size() - pos < sizeof(V)) {
    throw DecodeError("checkpoint truncated");
  }
  V v;
  std::memcpy(&v, bytes.data() + pos, sizeof(V));
  pos += sizeof(V);
  return v;
}

json DenoiserToJson(const DenoiserConfig& c) {
  return {{"base_channels", c.base_channels},
          {"channel_mult", c.channel_mult},
          {"num_res_blocks", c.num_res_blocks},
          {"attention_levels", c.attention_levels},
          {"norm_groups", c.norm_groups},
          {"spade_hidden", c.spade_hidden},
          {"num_classes", c.num_classes},
          {"init_seed", c.init_seed},
          {"zero_init_output", c.zero_init_output}};
}

DenoiserConfig DenoiserFromJson(const json& j) {
  DenoiserConfig c;
  c.base_channels = j.at("base_channels").get<int>();
  c.channel_mult = j.at("channel_mult").get<std::vector<int>>();
  c.num_res_blocks = j.at("num_res_blocks").get<int>();
  c.attention_levels = j.at("attention_levels").get<std::vector<int>>();
  c.norm_groups = j.at("norm_groups").get<int>();
  c.spade_hidden = j.at("spade_hidden").get<int>();
  c.num_classes = j.at("num_classes").get<int>();
  c.init_seed = j.at("init_seed").get<std::uint64_t>();
  c.zero_init_output = j.at("zero_init_output").get<bool>();
  c.Validate();
  return c;
}

}  // namespace

std::vector<std::uint8_t> SerializeCheckpoint(const nn::UNet<float>& model,
                                              const ScheduleConfig& schedule) {
  json manifest;
  manifest["denoiser"] = DenoiserToJson(model.config());
  manifest["schedule"] = {{"steps", schedule.steps},
                          {"beta_start", schedule.beta_start},
                          {"beta_end", schedule.beta_end}};
  json tensors = json::array();
  for (const auto& [name, p] : model.params().params()) {
    const auto& v = p->value;
    tensors.push_back({{"name", name}, {"shape", {v.n, v.c, v.h, v.w}}});
  }
  manifest["tensors"] = tensors;
  const std::string text = manifest.dump();

  std::vector<std::uint8_t> out(kCheckpointMagic, kCheckpointMagic + 4);
  Append<std::uint32_t>(out, kCheckpointVersion);
  Append<std::uint64_t>(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& [name, p] : model.params().params()) {
    for (float f : p->value.data) Append<float>(out, f);
  }
  return out;
}

LoadedCheckpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4,
                                      kCheckpointMagic)) {
    throw DecodeError("not a checkpoint (bad magic)");
  }
  std::size_t pos = 4;
  const auto version = Read<std::uint32_t>(bytes, pos);
  if (version != kCheckpointVersion) {
    throw DecodeError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  const auto len = Read<std::uint64_t>(bytes, pos);
  if (len > bytes.size() - pos) throw DecodeError("checkpoint truncated");
  json manifest;
  LoadedCheckpoint out;
  std::vector<std::pair<std::string, std::vector<int>>> entries;
  try {
    manifest = json::parse(bytes.begin() + pos, bytes.begin() + pos + len);
    const json& sj = manifest.at("schedule");
    out.schedule.steps = sj.at("steps").get<int>();
    out.schedule.beta_start = sj.at("beta_start").get<double>();
    out.schedule.beta_end = sj.at("beta_end").get<double>();
    out.model = std::make_unique<nn::UNet<float>>(
        DenoiserFromJson(manifest.at("denoiser")));
    for (const json& t : manifest.at("tensors")) {
      entries.emplace_back(t.at("name").get<std::string>(),
                           t.at("shape").get<std::vector<int>>());
    }
  } catch (const json::exception& e) {
    throw DecodeError(std::string("checkpoint manifest: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("checkpoint manifest: ") + e.what());
  }
  pos += len;

  const auto& params = out.model->params().params();
  if (entries.size() != params.size()) {
    throw DecodeError("checkpoint tensor count does not match architecture");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& v = params[k].second->value;
    const std::vector<int> shape = {v.n, v.c, v.h, v.w};
    if (entries[k].first != params[k].first || entries[k].second != shape) {
      throw DecodeError("checkpoint tensor mismatch at '" + entries[k].first +
                        "'");
    }
    if ((bytes.size() - pos) / sizeof(float) < v.size()) {
      throw DecodeError("checkpoint truncated");
    }
    std::memcpy(v.data.data(), bytes.data() + pos, v.size() * sizeof(float));
    pos += v.size() * sizeof(float);
  }
  if (pos != bytes.size()) throw DecodeError("checkpoint has trailing bytes");
  return out;
}

void SaveCheckpoint(const std::string& path, const nn::UNet<float>& model,
                    const ScheduleConfig& schedule) {
  WriteFileBytes(path, SerializeCheckpoint(model, schedule));
}

LoadedCheckpoint LoadCheckpoint(const std::string& path) {
  return DeserializeCheckpoint(ReadFileBytes(path));
}

}  // namespace spic
