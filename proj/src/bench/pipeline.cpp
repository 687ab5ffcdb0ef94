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

#include "spic/bench/pipeline.hpp"

#include <limits>

#include "spic/core/error.hpp"
#include "spic/encoder/coarse_codec.hpp"
#include "spic/encoder/resample.hpp"
#include "spic/encoder/ssm_codec.hpp"

namespace spic {

EncodeResult EncodeImage(const Image& x, const Segmenter& segmenter,
                         const EncodeOptions& opt,
                         const ExternalTools& tools) {
  SPIC_REQUIRE(x.height() <= std::numeric_limits<std::uint16_t>::max() &&
                   x.width() <= std::numeric_limits<std::uint16_t>::max(),
               "image too large for the container");
  SegmentationMap s = Segment(x, segmenter);
  BitstreamHeader meta;
  meta.width = static_cast<std::uint16_t>(x.width());
  meta.height = static_cast<std::uint16_t>(x.height());
  meta.num_classes = static_cast<std::uint8_t>(s.num_classes());
  meta.ssm_codec = opt.ssm_codec;
  meta.coarse_codec = opt.coarse_codec;
  meta.coarse_quality = static_cast<std::uint8_t>(opt.quality);
  ValidateHeader(meta);
  const auto ssm_bytes = EncodeSsmLossless(s, opt.ssm_codec, tools);
  const auto coarse_bytes =
      EncodeCoarseLossy(DownscaleAverage(x), opt.quality, opt.coarse_codec,
                        tools);
  EncodeResult out{std::move(s), Pack(ssm_bytes, coarse_bytes, meta), {}};
  out.rate = ComputeRate(ssm_bytes.size(), coarse_bytes.size(), kHeaderSize,
                         x.width(), x.height());
  return out;
}

DecodedStream DecodeStream(std::span<const std::uint8_t> bytes,
                           const ExternalTools& tools) {
  const SemanticBitstream bs = Unpack(bytes);
  return {bs.header, DecodeSsmLossless(bs.ssm_payload, bs.header, tools),
          DecodeCoarseLossy(bs.coarse_payload, bs.header, tools)};
}

Image ReconstructDiffusion(const DecodedStream& d, const NoisePredictor& model,
                           const NoiseSchedule& sched,
                           const SamplerConfig& cfg) {
  return Sample(model, sched, d.coarse, d.ssm, cfg);
}

Image ReconstructBilinear(const DecodedStream& d) {
  return UpscaleCoarse(d.coarse);
}

std::vector<TrainingExample> BuildTrainingSet(
    const std::vector<LoadedExample>& examples, int quality,
    CoarseCodec codec, const ExternalTools& tools) {
  std::vector<TrainingExample> out;
  out.reserve(examples.size());
  for (const LoadedExample& ex : examples) {
    BitstreamHeader h;
    h.width = static_cast<std::uint16_t>(ex.image.width());
    h.height = static_cast<std::uint16_t>(ex.image.height());
    h.coarse_codec = codec;
    h.coarse_quality = static_cast<std::uint8_t>(quality);
    const auto payload =
        EncodeCoarseLossy(DownscaleAverage(ex.image), quality, codec, tools);
    out.push_back({ex.image, DecodeCoarseLossy(payload, h, tools),
                   ex.annotation});
  }
  return out;
}

}  // namespace spic
