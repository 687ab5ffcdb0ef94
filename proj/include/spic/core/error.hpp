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

#ifndef SPIC_CORE_ERROR_HPP_
#define SPIC_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace spic {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument does not hold (shape, range, parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A compressed payload or file could not be decoded.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// The segmenter failed to produce a valid map.
class SegmenterError : public Error {
 public:
  using Error::Error;
};

// An external codec executable is not installed or failed to run.
class ToolUnavailableError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace internal {
[[noreturn]] void ThrowInvalid(const std::string& what);
}  // namespace internal

#define SPIC_REQUIRE(cond, msg)                       \
  do {                                                \
    if (!(cond)) ::spic::internal::ThrowInvalid(msg); \
  } while (0)

}  // namespace spic

#endif  // SPIC_CORE_ERROR_HPP_
