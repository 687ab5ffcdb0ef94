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

#ifndef SPIC_BENCH_SWEEP_HPP_
#define SPIC_BENCH_SWEEP_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spic/bench/dataset.hpp"
#include "spic/diffusion/config.hpp"
#include "spic/diffusion/sampler.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/header.hpp"
#include "spic/encoder/rate.hpp"
#include "spic/encoder/segmenter.hpp"
#include "spic/metrics/feature_extractor.hpp"
#include "spic/metrics/psnr.hpp"

namespace spic {

inline constexpr char kMethodSpic[] = "spic";
inline constexpr char kMethodBilinear[] = "coarse-bilinear";
inline constexpr char kMethodDctFull[] = "dct-full";
inline constexpr char kMethodBpgFull[] = "bpg-full";

struct SweepConfig {
  std::vector<int> qualities = {10, 20, 30, 40};
  SsmCodec ssm_codec = SsmCodec::kReference;
  CoarseCodec coarse_codec = CoarseCodec::kReference;
  // Full-image codecs run at the BPP of each spic row.
  std::vector<std::string> baselines = {kMethodDctFull, kMethodBpgFull};
  bool include_bilinear = true;
  SamplerConfig sampler;
  std::string output_dir = "sweep_out";
  std::uint64_t seed = 0;
  int threads = 1;
};

// `sweep.` keys plus the `sampler.` keys.
void ReadSweepConfig(KeyValueConfig& kv, SweepConfig& cfg);

struct SweepRow {
  std::string image_id;
  std::string method;
  int quality = 0;        // ladder quality of the operating point
  int codec_quality = 0;  // quality actually used by the codec
  RateReport rate;
  double miou = 0;
  std::optional<double> fid_batch;
  PsnrResult psnr;
  std::string status = "ok";
};

// Rows for every (image, quality): spic, optionally coarse-bilinear, and one
// per baseline. Failures are recorded in the row status and the sweep goes
// on. fid_batch is the FID between all originals and all reconstructions of
// the same (method, quality). Bit-identical for a fixed config.
std::vector<SweepRow> RunSweep(const std::vector<LoadedExample>& images,
                               const Segmenter& segmenter,
                               const NoisePredictor& model,
                               const NoiseSchedule& sched,
                               const SweepConfig& cfg,
                               const FeatureExtractor& features,
                               const ExternalTools& tools =
                                   ExternalTools::FromEnvironment());

// image_id,bpp_total,bpp_ssm,bpp_coarse,miou,fid_batch,psnr, followed by
// method,quality,codec_quality,bpp_header,bits_total,bits_ssm,bits_coarse,
// bits_header,pixels,status. Missing values are empty; identical-image PSNR
// is written as "inf".
void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> ReadSweepCsv(std::istream& in);

// Per-row sampler seed derived from the sweep seed, image index and quality.
std::uint64_t RowSeed(std::uint64_t seed, std::size_t image_index,
                      int quality);

}  // namespace spic

#endif  // SPIC_BENCH_SWEEP_HPP_
