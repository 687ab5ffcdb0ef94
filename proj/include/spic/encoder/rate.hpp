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

#ifndef SPIC_ENCODER_RATE_HPP_
#define SPIC_ENCODER_RATE_HPP_

#include <cstdint>
#include <string>

#include "spic/encoder/bitstream.hpp"

namespace spic {

// Exact rate bits / pixels. Rates over the same image share a denominator,
// so sums are exact integer additions.
struct Bpp {
  std::uint64_t bits = 0;
  std::uint64_t pixels = 1;

  double value() const {
    return static_cast<double>(bits) / static_cast<double>(pixels);
  }
  Bpp operator+(const Bpp& o) const;
  bool operator==(const Bpp&) const = default;
};

struct RateReport {
  Bpp ssm;
  Bpp coarse;
  Bpp header;
  Bpp total;

  // {"bpp_total":...,"bpp_ssm":...,"bpp_coarse":...,"bpp_header":...}
  std::string ToJson() const;
};

// Rate of each bitstream part relative to a width x height image.
RateReport ComputeRate(const SemanticBitstream& bs, int width, int height);
RateReport ComputeRate(std::size_t ssm_bytes, std::size_t coarse_bytes,
                       std::size_t header_bytes, int width, int height);

}  // namespace spic

#endif  // SPIC_ENCODER_RATE_HPP_
