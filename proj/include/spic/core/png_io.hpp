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

#ifndef SPIC_CORE_PNG_IO_HPP_
#define SPIC_CORE_PNG_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"

namespace spic {

// 8-bit quantization used at file boundaries: round(v * 255).
std::uint8_t QuantizeToByte(double v);

// Reads any PNG and converts it to 8-bit RGB (alpha is composited away by
// libpng's simplified API onto black).
Image ReadImagePng(const std::string& path);
void WriteImagePng(const std::string& path, const Image& img);

// Decodes/encodes an 8-bit RGB PNG held in memory.
Image DecodeImagePng(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> EncodeImagePng(const Image& img);

// Single-channel 8-bit label rasters. Labels >= num_classes are rejected.
SegmentationMap ReadLabelPng(const std::string& path, int num_classes);
void WriteLabelPng(const std::string& path, const SegmentationMap& s);

}  // namespace spic

#endif  // SPIC_CORE_PNG_IO_HPP_
