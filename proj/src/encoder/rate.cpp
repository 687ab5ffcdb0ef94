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

#include "spic/encoder/rate.hpp"

#include <cstdio>

namespace spic {

Bpp Bpp::operator+(const Bpp& o) const {
  SPIC_REQUIRE(pixels == o.pixels, "Bpp: adding rates over different images");
  return {bits + o.bits, pixels};
}

std::string RateReport::ToJson() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "{\"bpp_total\":%.17g,\"bpp_ssm\":%.17g,\"bpp_coarse\":%.17g,"
                "\"bpp_header\":%.17g}",
                total.value(), ssm.value(), coarse.value(), header.value());
  return buf;
}

RateReport ComputeRate(std::size_t ssm_bytes, std::size_t coarse_bytes,
                       std::size_t header_bytes, int width, int height) {
  SPIC_REQUIRE(width > 0 && height > 0, "ComputeRate: w * h must be > 0");
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  RateReport r;
  r.ssm = {8 * static_cast<std::uint64_t>(ssm_bytes), pixels};
  r.coarse = {8 * static_cast<std::uint64_t>(coarse_bytes), pixels};
  r.header = {8 * static_cast<std::uint64_t>(header_bytes), pixels};
  r.total = r.ssm + r.coarse + r.header;
  return r;
}

RateReport ComputeRate(const SemanticBitstream& bs, int width, int height) {
  return ComputeRate(bs.ssm_payload.size(), bs.coarse_payload.size(),
                     kHeaderSize, width, height);
}

}  // namespace spic
