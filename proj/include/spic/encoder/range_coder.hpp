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

#ifndef SPIC_ENCODER_RANGE_CODER_HPP_
#define SPIC_ENCODER_RANGE_CODER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace spic::rc {

// Adaptive binary range coder in the style of LZMA: 32-bit range, 11-bit
// probabilities, carry propagation through a cached byte. The decoder
// consumes exactly the bytes the encoder produced.

inline constexpr int kProbBits = 11;
inline constexpr std::uint16_t kProbOne = 1 << kProbBits;
inline constexpr int kAdaptShift = 5;

// Probability that the next bit is 0, in units of 1/2048.
struct BitModel {
  std::uint16_t p = kProbOne / 2;
};

class Encoder {
 public:
  void EncodeBit(BitModel& m, int bit);
  // Equiprobable bits, most significant first.
  void EncodeDirect(std::uint32_t value, int num_bits);
  // Emits the final bytes; the encoder must not be used afterwards.
  std::vector<std::uint8_t> Finish();

 private:
  void ShiftLow();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

// Throws DecodeError when the input runs out.
class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> in);
  int DecodeBit(BitModel& m);
  std::uint32_t DecodeDirect(int num_bits);
  // Throws DecodeError unless every input byte was consumed.
  void ExpectEnd() const;

 private:
  std::uint8_t NextByte();
  void Normalize();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

// Fixed-width unsigned value coded MSB-first through a binary tree of
// adaptive contexts.
class BitTreeModel {
 public:
  explicit BitTreeModel(int num_bits);
  void Encode(Encoder& enc, std::uint32_t value);
  std::uint32_t Decode(Decoder& dec);
  int num_bits() const { return num_bits_; }

 private:
  int num_bits_;
  std::vector<BitModel> probs_;
};

// Unsigned integers of unbounded size: adaptive Elias-gamma on value + 1.
// The prefix length is coded in unary and the mantissa bits get one context
// per (length, position) pair.
class UIntModel {
 public:
  static constexpr int kMaxBits = 32;
  void Encode(Encoder& enc, std::uint32_t value);
  std::uint32_t Decode(Decoder& dec);

 private:
  std::array<BitModel, kMaxBits + 1> prefix_{};
  std::array<std::array<BitModel, kMaxBits>, kMaxBits + 1> mantissa_{};
};

// Signed integers: zero flag, sign, then |v| - 1 through a UIntModel.
class SIntModel {
 public:
  void Encode(Encoder& enc, std::int32_t value);
  std::int32_t Decode(Decoder& dec);

 private:
  BitModel zero_;
  BitModel sign_;
  UIntModel magnitude_;
};

}  // namespace spic::rc

#endif  // SPIC_ENCODER_RANGE_CODER_HPP_
