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

#ifndef SPIC_BENCH_PIPELINE_HPP_
#define SPIC_BENCH_PIPELINE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"
#include "spic/bench/dataset.hpp"
#include "spic/diffusion/sampler.hpp"
#include "spic/diffusion/trainer.hpp"
#include "spic/encoder/bitstream.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/rate.hpp"
#include "spic/encoder/segmenter.hpp"

namespace spic {

struct EncodeOptions {
  int quality = 30;
  SsmCodec ssm_codec = SsmCodec::kReference;
  CoarseCodec coarse_codec = CoarseCodec::kReference;
};

struct EncodeResult {
  SegmentationMap ssm;
  std::vector<std::uint8_t> bytes;
  RateReport rate;
};

// x -> (segment, lossless SSM) + (downscale, lossy coarse) -> container.
EncodeResult EncodeImage(const Image& x, const Segmenter& segmenter,
                         const EncodeOptions& opt,
                         const ExternalTools& tools =
                             ExternalTools::FromEnvironment());

struct DecodedStream {
  BitstreamHeader header;
  SegmentationMap ssm;
  CoarseImage coarse;
};

DecodedStream DecodeStream(std::span<const std::uint8_t> bytes,
                           const ExternalTools& tools =
                               ExternalTools::FromEnvironment());

// Diffusion reconstruction conditioned on the decoded SSM and coarse image.
Image ReconstructDiffusion(const DecodedStream& d, const NoisePredictor& model,
                           const NoiseSchedule& sched,
                           const SamplerConfig& cfg);
// Bilinear expansion of the decoded coarse image.
Image ReconstructBilinear(const DecodedStream& d);

// Training triples: the image, its coarse version after a round trip
// through the coarse codec, and its annotation.
std::vector<TrainingExample> BuildTrainingSet(
    const std::vector<LoadedExample>& examples, int quality,
    CoarseCodec codec = CoarseCodec::kReference,
    const ExternalTools& tools = ExternalTools::FromEnvironment());

}  // namespace spic

#endif  // SPIC_BENCH_PIPELINE_HPP_
