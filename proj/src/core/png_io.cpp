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

#include "spic/core/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace spic {
namespace {

// RAII wrapper for png_image.
class PngImage {
 public:
  PngImage() {
    std::memset(&image_, 0, sizeof(image_));
    image_.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image_); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
  png_image* get() { return &image_; }
  png_image* operator->() { return &image_; }

 private:
  png_image image_;
};

std::vector<std::uint8_t> ReadPixels(PngImage& png, std::uint32_t format,
                                     const std::string& what) {
  png->format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(*png.get()));
  if (!png_image_finish_read(png.get(), nullptr, pixels.data(), 0, nullptr)) {
    throw IoError(what + ": " + png->message);
  }
  return pixels;
}

Image PixelsToImage(const std::vector<std::uint8_t>& pixels, int h, int w) {
  std::vector<double> planar(static_cast<std::size_t>(3) * h * w);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  for (std::size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < 3; ++c) {
      planar[c * plane + i] = pixels[i * 3 + c] / 255.0;
    }
  }
  return Image::FromPlanar(h, w, std::move(planar));
}

std::vector<std::uint8_t> ImageToPixels(const Image& img) {
  const std::size_t plane = img.plane_size();
  std::vector<std::uint8_t> pixels(plane * 3);
  auto v = img.values();
  for (std::size_t i = 0; i < plane; ++i) {
    for (int c = 0; c < 3; ++c) {
      pixels[i * 3 + c] = QuantizeToByte(v[c * plane + i]);
    }
  }
  return pixels;
}

}  // namespace

std::uint8_t QuantizeToByte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image ReadImagePng(const std::string& path) {
  PngImage png;
  if (!png_image_begin_read_from_file(png.get(), path.c_str())) {
    throw IoError("cannot read PNG '" + path + "': " + png->message);
  }
  const int w = static_cast<int>(png->width);
  const int h = static_cast<int>(png->height);
  return PixelsToImage(ReadPixels(png, PNG_FORMAT_RGB, path), h, w);
}

Image DecodeImagePng(const std::vector<std::uint8_t>& bytes) {
  PngImage png;
  if (!png_image_begin_read_from_memory(png.get(), bytes.data(),
                                        bytes.size())) {
    throw DecodeError(std::string("cannot decode PNG: ") + png->message);
  }
  const int w = static_cast<int>(png->width);
  const int h = static_cast<int>(png->height);
  return PixelsToImage(ReadPixels(png, PNG_FORMAT_RGB, "PNG buffer"), h, w);
}

void WriteImagePng(const std::string& path, const Image& img) {
  PngImage png;
  png->width = img.width();
  png->height = img.height();
  png->format = PNG_FORMAT_RGB;
  auto pixels = ImageToPixels(img);
  if (!png_image_write_to_file(png.get(), path.c_str(), 0, pixels.data(), 0,
                               nullptr)) {
    throw IoError("cannot write PNG '" + path + "': " + png->message);
  }
}

std::vector<std::uint8_t> EncodeImagePng(const Image& img) {
  PngImage png;
  png->width = img.width();
  png->height = img.height();
  png->format = PNG_FORMAT_RGB;
  auto pixels = ImageToPixels(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(*png.get(), size, 0, pixels.data(), 0,
                                       nullptr)) {
    throw IoError(std::string("cannot size PNG: ") + png->message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(png.get(), out.data(), &size, 0,
                                 pixels.data(), 0, nullptr)) {
    throw IoError(std::string("cannot encode PNG: ") + png->message);
  }
  out.resize(size);
  return out;
}

SegmentationMap ReadLabelPng(const std::string& path, int num_classes) {
  PngImage png;
  if (!png_image_begin_read_from_file(png.get(), path.c_str())) {
    throw IoError("cannot read label PNG '" + path + "': " + png->message);
  }
  // Palette or RGB label files would be silently converted to luminance.
  if ((png->format & PNG_FORMAT_FLAG_COLOR) != 0) {
    throw IoError("label PNG '" + path + "' is not single-channel");
  }
  const int w = static_cast<int>(png->width);
  const int h = static_cast<int>(png->height);
  auto pixels = ReadPixels(png, PNG_FORMAT_GRAY, path);
  // The simplified API linearizes 16-bit input; only 8-bit rasters are legal.
  return SegmentationMap::FromLabels(h, w, num_classes, std::move(pixels));
}

void WriteLabelPng(const std::string& path, const SegmentationMap& s) {
  PngImage png;
  png->width = s.width();
  png->height = s.height();
  png->format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(png.get(), path.c_str(), 0, s.labels().data(),
                               0, nullptr)) {
    throw IoError("cannot write label PNG '" + path + "': " + png->message);
  }
}

}  // namespace spic
