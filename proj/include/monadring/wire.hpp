#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The Monadring Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "monadring/common.hpp"

#include <array>
#include <cstddef>

namespace monadring::wire {

/// Every framed record starts with these four bytes.
inline constexpr std::array<std::uint8_t, 4> kMagic{'M', 'N', 'R', '1'};

/// Record kinds following the magic byte sequence.
enum class RecordKind : std::uint8_t
{
  SecretKey      = 1,
  PublicKey      = 2,
  Ciphertext     = 3,
  TokenDelivery  = 16,
  TokenCopyResend = 17,
  GroupBroadcast = 18,
};

/// Little-endian writer. Variable-length fields are u32 length prefixed.
class ByteWriter
{
public:
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v);
  void f64(double v);
  void bytes(std::span<std::uint8_t const> data);  // length-prefixed
  void raw(std::span<std::uint8_t const> data);
  void str(std::string_view text);

  Bytes const &data() const
  {
    return out_;
  }
  Bytes take()
  {
    return std::move(out_);
  }

private:
  Bytes out_;
};

class ByteReader
{
public:
  explicit ByteReader(std::span<std::uint8_t const> data)
    : data_{data}
  {}

  std::uint8_t  u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t  i64();
  double        f64();
  Bytes         bytes();
  std::string   str();
  void          raw(std::span<std::uint8_t> out);

  bool done() const
  {
    return pos_ == data_.size();
  }
  std::size_t remaining() const
  {
    return data_.size() - pos_;
  }

private:
  void need(std::size_t n) const;

  std::span<std::uint8_t const> data_;
  std::size_t                   pos_{0};
};

/// MNR1 frame: magic, u8 kind, u32 body length, body.
Bytes frame(RecordKind kind, std::span<std::uint8_t const> body);

struct Frame
{
  RecordKind kind;
  Bytes      body;
};

/// Throws DecodeError on bad magic, unknown kind or length mismatch.
Frame unframe(std::span<std::uint8_t const> data);

}  // namespace monadring::wire
