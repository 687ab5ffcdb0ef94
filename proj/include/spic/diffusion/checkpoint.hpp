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

#ifndef SPIC_DIFFUSION_CHECKPOINT_HPP_
#define SPIC_DIFFUSION_CHECKPOINT_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spic/diffusion/config.hpp"
#include "spic/diffusion/unet.hpp"

namespace spic {

inline constexpr char kCheckpointMagic[4] = {'S', 'P', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout: magic(4) version(u32 LE) manifest_len(u64 LE) manifest(JSON) then
// float32 LE weights in manifest order. The manifest records the denoiser
// config, schedule parameters and each tensor's name and shape.
struct LoadedCheckpoint {
  ScheduleConfig schedule;
  std::unique_ptr<nn::UNet<float>> model;
};

std::vector<std::uint8_t> SerializeCheckpoint(const nn::UNet<float>& model,
                                              const ScheduleConfig& schedule);
LoadedCheckpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const std::string& path, const nn::UNet<float>& model,
                    const ScheduleConfig& schedule);
LoadedCheckpoint LoadCheckpoint(const std::string& path);

}  // namespace spic

#endif  // SPIC_DIFFUSION_CHECKPOINT_HPP_
