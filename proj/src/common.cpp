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
#include "monadring/digest.hpp"
#include "monadring/rng.hpp"
#include "monadring/wire.hpp"

#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <bit>
#include <cstring>

namespace monadring {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c)
{
  if (c >= '0' && c <= '9')
  {
    return c - '0';
  }
  if (c >= 'a' && c <= 'f')
  {
    return c - 'a' + 10;
  }
  if (c >= 'A' && c <= 'F')
  {
    return c - 'A' + 10;
  }
  throw DecodeError("invalid hex digit");
}

}  // namespace

std::string to_hex(std::span<std::uint8_t const> data)
{
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data)
  {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex)
{
  if (hex.size() % 2 != 0)
  {
    throw DecodeError("odd-length hex string");
  }
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    out[i] = static_cast<std::uint8_t>(hex_value(hex[2 * i]) << 4 | hex_value(hex[2 * i + 1]));
  }
  return out;
}

Bytes to_bytes(std::string_view text)
{
  return Bytes(text.begin(), text.end());
}

// ---- digests ---------------------------------------------------------------

Digest sha256(std::span<std::uint8_t const> data)
{
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256(std::string_view text)
{
  return sha256(std::span{reinterpret_cast<std::uint8_t const *>(text.data()), text.size()});
}

Digest hmac_sha256(std::span<std::uint8_t const> key, std::span<std::uint8_t const> data)
{
  Digest       out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
       out.data(), &len);
  return out;
}

std::string to_hex(Digest const &digest)
{
  return to_hex(std::span<std::uint8_t const>{digest});
}

std::string short_hex(Digest const &digest)
{
  return to_hex(digest).substr(0, 16);
}

DigestBuilder &DigestBuilder::add(std::span<std::uint8_t const> data)
{
  add_u64(data.size());
  buffer_.insert(buffer_.end(), data.begin(), data.end());
  return *this;
}

DigestBuilder &DigestBuilder::add(std::string_view text)
{
  return add(std::span{reinterpret_cast<std::uint8_t const *>(text.data()), text.size()});
}

DigestBuilder &DigestBuilder::add(Digest const &digest)
{
  buffer_.insert(buffer_.end(), digest.begin(), digest.end());
  return *this;
}

DigestBuilder &DigestBuilder::add_u64(std::uint64_t value)
{
  for (int i = 0; i < 8; ++i)
  {
    buffer_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  return *this;
}

DigestBuilder &DigestBuilder::add_i64(std::int64_t value)
{
  return add_u64(static_cast<std::uint64_t>(value));
}

Digest DigestBuilder::finish() const
{
  return sha256(buffer_);
}

// ---- rng -------------------------------------------------------------------

Rng Rng::derive(std::uint64_t seed, std::string_view label, std::uint64_t index)
{
  auto const d = DigestBuilder{}.add_u64(seed).add(label).add_u64(index).finish();
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i)
  {
    s |= std::uint64_t{d[i]} << (8 * i);
  }
  return Rng{s};
}

std::uint64_t Rng::below(std::uint64_t bound)
{
  if (bound == 0)
  {
    throw InvalidArgument("Rng::below: zero bound");
  }
  // rejection keeps the draw exactly uniform
  std::uint64_t const limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;)
  {
    auto const x = engine_();
    if (x < limit)
    {
      return x % bound;
    }
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi)
{
  if (hi < lo)
  {
    throw InvalidArgument("Rng::between: empty range");
  }
  auto const span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0)
  {
    return static_cast<std::int64_t>(engine_());
  }
  return lo + static_cast<std::int64_t>(below(span));
}

double Rng::unit()
{
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

// ---- wire ------------------------------------------------------------------

namespace wire {

void ByteWriter::u8(std::uint8_t v)
{
  out_.push_back(v);
}

void ByteWriter::u32(std::uint32_t v)
{
  for (int i = 0; i < 4; ++i)
  {
    out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::u64(std::uint64_t v)
{
  for (int i = 0; i < 8; ++i)
  {
    out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void ByteWriter::i64(std::int64_t v)
{
  u64(static_cast<std::uint64_t>(v));
}

void ByteWriter::f64(double v)
{
  u64(std::bit_cast<std::uint64_t>(v));
}

void ByteWriter::bytes(std::span<std::uint8_t const> data)
{
  u32(static_cast<std::uint32_t>(data.size()));
  raw(data);
}

void ByteWriter::raw(std::span<std::uint8_t const> data)
{
  out_.insert(out_.end(), data.begin(), data.end());
}

void ByteWriter::str(std::string_view text)
{
  bytes(std::span{reinterpret_cast<std::uint8_t const *>(text.data()), text.size()});
}

void ByteReader::need(std::size_t n) const
{
  if (data_.size() - pos_ < n)
  {
    throw DecodeError("truncated record");
  }
}

std::uint8_t ByteReader::u8()
{
  need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::u32()
{
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
  {
    v |= std::uint32_t{data_[pos_++]} << (8 * i);
  }
  return v;
}

std::uint64_t ByteReader::u64()
{
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
  {
    v |= std::uint64_t{data_[pos_++]} << (8 * i);
  }
  return v;
}

std::int64_t ByteReader::i64()
{
  return static_cast<std::int64_t>(u64());
}

double ByteReader::f64()
{
  return std::bit_cast<double>(u64());
}

Bytes ByteReader::bytes()
{
  auto const n = u32();
  need(n);
  Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
            data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return out;
}

std::string ByteReader::str()
{
  auto const b = bytes();
  return std::string(b.begin(), b.end());
}

void ByteReader::raw(std::span<std::uint8_t> out)
{
  need(out.size());
  std::memcpy(out.data(), data_.data() + pos_, out.size());
  pos_ += out.size();
}

Bytes frame(RecordKind kind, std::span<std::uint8_t const> body)
{
  ByteWriter w;
  w.raw(kMagic);
  w.u8(static_cast<std::uint8_t>(kind));
  w.bytes(body);
  return w.take();
}

Frame unframe(std::span<std::uint8_t const> data)
{
  ByteReader                  r{data};
  std::array<std::uint8_t, 4> magic{};
  r.raw(magic);
  if (magic != kMagic)
  {
    throw DecodeError("bad magic, expected MNR1");
  }
  auto const kind = r.u8();
  switch (static_cast<RecordKind>(kind))
  {
  case RecordKind::SecretKey:
  case RecordKind::PublicKey:
  case RecordKind::Ciphertext:
  case RecordKind::TokenDelivery:
  case RecordKind::TokenCopyResend:
  case RecordKind::GroupBroadcast:
    break;
  default:
    throw DecodeError("unknown record kind " + std::to_string(kind));
  }
  auto body = r.bytes();
  if (!r.done())
  {
    throw DecodeError("trailing bytes after frame");
  }
  return Frame{static_cast<RecordKind>(kind), std::move(body)};
}

}  // namespace wire

}  // namespace monadring
