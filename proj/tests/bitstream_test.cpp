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

#include <random>

#include <gtest/gtest.h>

#include "spic/bench/pipeline.hpp"
#include "spic/bench/synthetic.hpp"
#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"
#include "spic/encoder/bitstream.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/rate.hpp"

namespace spic {
namespace {

BitstreamHeader TinyHeader() {
  BitstreamHeader h;
  h.width = 8;
  h.height = 4;
  h.num_classes = 3;
  h.coarse_quality = 30;
  return h;
}

TEST(BitstreamTest, PackMatchesHandWrittenBytes) {
  const std::vector<std::uint8_t> expect = {
      'S', 'P', 'I', 'C', 0x01, 0x00, 0x08, 0x00, 0x04, 0x03, 0x00, 0x00,
      0x1e, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x02, 0xaa, 0xbb, 0xcc};
  EXPECT_EQ(Pack({0xaa}, {0xbb, 0xcc}, TinyHeader()), expect);
  const SemanticBitstream bs = Unpack(expect);
  EXPECT_EQ(bs.header, TinyHeader());
  EXPECT_EQ(bs.ssm_payload, std::vector<std::uint8_t>{0xaa});
  EXPECT_EQ(bs.coarse_payload, (std::vector<std::uint8_t>{0xbb, 0xcc}));
  EXPECT_EQ(bs.size_bytes(), expect.size());
  EXPECT_EQ(Pack(bs), expect);
}

TEST(BitstreamTest, ErrorsAreTyped) {
  const auto good = Pack({1, 2}, {3}, TinyHeader());
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(Unpack(bad), BadMagicError);
  EXPECT_THROW(Unpack(std::vector<std::uint8_t>(good.begin(), good.begin() + 10)),
               TruncatedBitstreamError);
  bad = good;
  bad[4] = 2;
  EXPECT_THROW(Unpack(bad), UnsupportedVersionError);
  bad = good;
  bad[12] = 0;
  EXPECT_THROW(Unpack(bad), InvalidHeaderError);
  bad = good;
  bad[10] = 9;
  EXPECT_THROW(Unpack(bad), InvalidHeaderError);
  bad = good;
  bad.push_back(0);
  EXPECT_THROW(Unpack(bad), LengthMismatchError);
  bad = good;
  bad.pop_back();
  EXPECT_THROW(Unpack(bad), LengthMismatchError);
  BitstreamHeader h = TinyHeader();
  h.width = 6;
  EXPECT_THROW(Pack({}, {}, h), InvalidArgument);
}

TEST(BitstreamTest, GoldenFileIsReproducedByteForByte) {
  const Image x = ReadImagePng(SPIC_TEST_DATA_DIR "/golden_input.png");
  const auto golden = ReadFileBytes(SPIC_TEST_DATA_DIR "/golden_input.spic");
  const EncodeResult r = EncodeImage(x, SyntheticSegmenter(5), {30});
  EXPECT_EQ(r.bytes, golden);
  const DecodedStream d = DecodeStream(golden);
  EXPECT_EQ(d.ssm, Segment(x, SyntheticSegmenter(5)));
}

TEST(BitstreamTest, HeaderMutationsNeverDecodeSilently) {
  const Image x = ReadImagePng(SPIC_TEST_DATA_DIR "/golden_input.png");
  const auto good = EncodeImage(x, SyntheticSegmenter(5), {30}).bytes;
  ExternalTools no_tools;
  no_tools.flif = no_tools.bpgenc = no_tools.bpgdec = "/nonexistent/tool";
  int mutations = 0;
  for (std::size_t i = 0; i < kHeaderSize; ++i) {
    for (int v = 0; v < 256; ++v) {
      if (v == good[i]) continue;
      auto bad = good;
      bad[i] = static_cast<std::uint8_t>(v);
      EXPECT_THROW(DecodeStream(bad, no_tools), Error)
          << "byte " << i << " value " << v;
      ++mutations;
    }
  }
  EXPECT_EQ(mutations, static_cast<int>(kHeaderSize) * 255);
  for (std::size_t n = 0; n < good.size(); ++n) {
    EXPECT_THROW(
        DecodeStream(std::span<const std::uint8_t>(good.data(), n), no_tools),
        DecodeError);
  }
}

TEST(RateTest, SumIdentityAndHeaderRate) {
  const RateReport r = ComputeRate(100, 250, kHeaderSize, 128, 64);
  EXPECT_EQ(r.total.bits, r.ssm.bits + r.coarse.bits + r.header.bits);
  EXPECT_EQ(r.total.bits, (100 + 250 + 21) * 8u);
  EXPECT_EQ(r.total.pixels, 128u * 64u);
  EXPECT_DOUBLE_EQ(r.header.value(), 21.0 * 8 / (128 * 64));
  EXPECT_EQ(r.ssm + r.coarse + r.header, r.total);
  EXPECT_EQ(r.ToJson(),
            "{\"bpp_total\":0.3623046875,\"bpp_ssm\":0.09765625,"
            "\"bpp_coarse\":0.244140625,\"bpp_header\":0.0205078125}");
}

TEST(RateTest, MismatchedDenominatorsRejected) {
  EXPECT_THROW((Bpp{8, 4} + Bpp{8, 5}), InvalidArgument);
}

}  // namespace
}  // namespace spic
