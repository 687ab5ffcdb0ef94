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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "spic/core/error.hpp"
#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"
#include "spic/core/png_io.hpp"
#include "test_util.hpp"

namespace spic {
namespace {

TEST(RasterTest, RejectsOutOfRangeValues) {
  EXPECT_THROW(Image(2, 2, 1.5), InvalidArgument);
  EXPECT_THROW(Image(0, 2, 0.0), InvalidArgument);
  Image img(2, 2, 0.5);
  EXPECT_THROW(img.set(0, 0, 0, -0.1), InvalidArgument);
  EXPECT_THROW(img.set(0, 0, 0, std::nan("")), InvalidArgument);
  EXPECT_NO_THROW(ModelRangeImage(1, 1, -1.0));
  EXPECT_THROW(Image::FromPlanar(1, 1, {0.0, 0.0}), InvalidArgument);
}

TEST(RasterTest, ModelRangeRoundTrip) {
  std::mt19937_64 rng(1);
  const Image img = testing::RandomRaster<FullResTag>(rng, 5, 7);
  const ModelRangeImage m = ToModelRange(img);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    EXPECT_DOUBLE_EQ(m.values()[i], 2 * img.values()[i] - 1);
  }
  const Image back = FromModelRange(m);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    EXPECT_NEAR(back.values()[i], img.values()[i], 1e-15);
  }
}

TEST(RasterTest, FromModelRangeClipsOvershoot) {
  const std::vector<double> raw = {-3, -1, 0, 1, 2, 0.5, 0, 0, 0, 0, 0, 0};
  const Image img = FromModelRange(2, 2, raw);
  EXPECT_EQ(img.at(0, 0, 0), 0.0);
  EXPECT_EQ(img.at(0, 0, 1), 0.0);
  EXPECT_EQ(img.at(0, 1, 0), 0.5);
  EXPECT_EQ(img.at(0, 1, 1), 1.0);
  EXPECT_EQ(img.at(1, 0, 0), 1.0);
  std::vector<double> bad(12, 0.0);
  bad[3] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(FromModelRange(2, 2, bad), InvalidArgument);
}

TEST(LabelsTest, RejectsLabelsOutsideClassRange) {
  EXPECT_THROW(SegmentationMap::FromLabels(1, 2, 2, {0, 2}), InvalidArgument);
  SegmentationMap s(2, 2, 3);
  EXPECT_THROW(s.set(0, 0, 3), InvalidArgument);
  EXPECT_THROW(SegmentationMap(2, 2, 0), InvalidArgument);
}

TEST(LabelsTest, OneHotArgMaxRoundTrip) {
  std::mt19937_64 rng(2);
  const SegmentationMap s = testing::RandomMap(rng, 9, 11, 4);
  const OneHotMap oh = OneHot(s);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 11; ++x) {
      int hot = 0;
      for (int k = 0; k < 4; ++k) hot += oh.at(k, y, x);
      EXPECT_EQ(hot, 1);
      EXPECT_EQ(oh.at(s.at(y, x), y, x), 1);
    }
  }
  EXPECT_EQ(ArgMax(oh), s);
}

TEST(LabelsTest, NearestResizeByFourReplicatesBlocks) {
  std::mt19937_64 rng(3);
  const SegmentationMap s = testing::RandomMap(rng, 4, 6, 5);
  const SegmentationMap up = ResizeLabelsNearest(s, 16, 24);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 24; ++x) EXPECT_EQ(up.at(y, x), s.at(y / 4, x / 4));
  }
  // Downscaling picks the source pixel under each destination centre.
  const SegmentationMap down = ResizeLabelsNearest(up, 4, 6);
  EXPECT_EQ(down, s);
}

TEST(LabelsTest, NearestSourceIndexStaysInRange) {
  for (int dst_size = 1; dst_size < 20; ++dst_size) {
    for (int src_size = 1; src_size < 20; ++src_size) {
      for (int d = 0; d < dst_size; ++d) {
        const int s = NearestSourceIndex(d, dst_size, src_size);
        EXPECT_GE(s, 0);
        EXPECT_LT(s, src_size);
      }
    }
  }
}

TEST(PngTest, ImageRoundTripIsByteExact) {
  testing::ScratchDir dir("png");
  std::mt19937_64 rng(4);
  Image img(6, 5, 0.0);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 6; ++y)
      for (int x = 0; x < 5; ++x) img.set(c, y, x, byte(rng) / 255.0);
  const auto path = (dir.path() / "a.png").string();
  WriteImagePng(path, img);
  const Image back = ReadImagePng(path);
  ASSERT_EQ(back.height(), 6);
  ASSERT_EQ(back.width(), 5);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    EXPECT_EQ(QuantizeToByte(back.values()[i]), QuantizeToByte(img.values()[i]));
  }
  EXPECT_EQ(DecodeImagePng(EncodeImagePng(img)), back);
}

TEST(PngTest, LabelRoundTripAndValidation) {
  testing::ScratchDir dir("label");
  std::mt19937_64 rng(5);
  const SegmentationMap s = testing::RandomMap(rng, 7, 9, 5);
  const auto path = (dir.path() / "l.png").string();
  WriteLabelPng(path, s);
  EXPECT_EQ(ReadLabelPng(path, 5), s);
  EXPECT_THROW(ReadLabelPng(path, 2), Error);
  const auto colour = (dir.path() / "c.png").string();
  WriteImagePng(colour, Image(2, 2, 0.3));
  EXPECT_THROW(ReadLabelPng(colour, 5), Error);
  EXPECT_THROW(ReadImagePng((dir.path() / "missing.png").string()), Error);
}

}  // namespace
}  // namespace spic
