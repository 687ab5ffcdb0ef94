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

#include "spic/encoder/range_coder.hpp"

#include <bit>

#include "spic/core/error.hpp"

namespace spic::rc {
namespace {
constexpr std::uint32_t kTopValue = 1u << 24;
}  // namespace

void Encoder::ShiftLow() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void Encoder::EncodeBit(BitModel& m, int bit) {
  const std::uint32_t bound = (range_ >> kProbBits) * m.p;
  if (bit == 0) {
    range_ = bound;
    m.p += (kProbOne - m.p) >> kAdaptShift;
  } else {
    low_ += bound;
    range_ -= bound;
    m.p -= m.p >> kAdaptShift;
  }
  while (range_ < kTopValue) {
    range_ <<= 8;
    ShiftLow();
  }
}

void Encoder::EncodeDirect(std::uint32_t value, int num_bits) {
  for (int i = num_bits - 1; i >= 0; --i) {
    range_ >>= 1;
    if ((value >> i) & 1u) low_ += range_;
    while (range_ < kTopValue) {
      range_ <<= 8;
      ShiftLow();
    }
  }
}

std::vector<std::uint8_t> Encoder::Finish() {
  for (int i = 0; i < 5; ++i) ShiftLow();
  return std::move(out_);
}

Decoder::Decoder(std::span<const std::uint8_t> in) : in_(in) {
  for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | NextByte();
}

std::uint8_t Decoder::NextByte() {
  if (pos_ >= in_.size()) throw DecodeError("range decoder: input truncated");
  return in_[pos_++];
}

void Decoder::Normalize() {
  while (range_ < kTopValue) {
    range_ <<= 8;
    code_ = (code_ << 8) | NextByte();
  }
}

int Decoder::DecodeBit(BitModel& m) {
  const std::uint32_t bound = (range_ >> kProbBits) * m.p;
  int bit;
  if (code_ < bound) {
    range_ = bound;
    m.p += (kProbOne - m.p) >> kAdaptShift;
    bit = 0;
  } else {
    code_ -= bound;
    range_ -= bound;
    m.p -= m.p >> kAdaptShift;
    bit = 1;
  }
  Normalize();
  return bit;
}

std::uint32_t Decoder::DecodeDirect(int num_bits) {
  std::uint32_t value = 0;
  for (int i = 0; i < num_bits; ++i) {
    range_ >>= 1;
    std::uint32_t bit = 0;
    if (code_ >= range_) {
      code_ -= range_;
      bit = 1;
    }
    value = (value << 1) | bit;
    Normalize();
  }
  return value;
}

void Decoder::ExpectEnd() const {
  if (pos_ != in_.size()) {
    throw DecodeError("range decoder: trailing bytes after payload");
  }
}

BitTreeModel::BitTreeModel(int num_bits)
    : num_bits_(num_bits), probs_(std::size_t{1} << num_bits) {}

void BitTreeModel::Encode(Encoder& enc, std::uint32_t value) {
  std::uint32_t node = 1;
  for (int i = num_bits_ - 1; i >= 0; --i) {
    const int bit = (value >> i) & 1u;
    enc.EncodeBit(probs_[node], bit);
    node = (node << 1) | bit;
  }
}

std::uint32_t BitTreeModel::Decode(Decoder& dec) {
  std::uint32_t node = 1;
  for (int i = 0; i < num_bits_; ++i) {
    node = (node << 1) | static_cast<std::uint32_t>(dec.DecodeBit(probs_[node]));
  }
  return node - (1u << num_bits_);
}

void UIntModel::Encode(Encoder& enc, std::uint32_t value) {
  const std::uint64_t v = static_cast<std::uint64_t>(value) + 1;
  const int n = std::bit_width(v) - 1;  // number of mantissa bits
  for (int i = 0; i < n; ++i) enc.EncodeBit(prefix_[i], 1);
  if (n < kMaxBits) enc.EncodeBit(prefix_[n], 0);
  for (int i = n - 1; i >= 0; --i) {
    enc.EncodeBit(mantissa_[n][i], static_cast<int>((v >> i) & 1u));
  }
}

std::uint32_t UIntModel::Decode(Decoder& dec) {
  int n = 0;
  while (n < kMaxBits && dec.DecodeBit(prefix_[n]) == 1) ++n;
  std::uint64_t v = 1;
  for (int i = n - 1; i >= 0; --i) {
    v = (v << 1) | static_cast<std::uint64_t>(dec.DecodeBit(mantissa_[n][i]));
  }
  if (v - 1 > 0xFFFFFFFFull) throw DecodeError("range decoder: integer overflow");
  return static_cast<std::uint32_t>(v - 1);
}

void SIntModel::Encode(Encoder& enc, std::int32_t value) {
  enc.EncodeBit(zero_, value != 0);
  if (value == 0) return;
  enc.EncodeBit(sign_, value < 0);
  const std::int64_t mag = value < 0 ? -static_cast<std::int64_t>(value) : value;
  magnitude_.Encode(enc, static_cast<std::uint32_t>(mag - 1));
}

std::int32_t SIntModel::Decode(Decoder& dec) {
  if (dec.DecodeBit(zero_) == 0) return 0;
  const bool negative = dec.DecodeBit(sign_) == 1;
  const std::uint32_t mag = magnitude_.Decode(dec);
  if (mag >= 0x7FFFFFFFu) throw DecodeError("range decoder: integer overflow");
  const std::int32_t v = static_cast<std::int32_t>(mag) + 1;
  return negative ? -v : v;
}

}  // namespace spic::rc
