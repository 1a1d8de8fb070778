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
#include <string>

namespace monadring {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<std::uint8_t const> data);
Digest sha256(std::string_view text);
Digest hmac_sha256(std::span<std::uint8_t const> key, std::span<std::uint8_t const> data);

std::string to_hex(Digest const &digest);

/// First 16 hex characters, used in logs and transcripts.
std::string short_hex(Digest const &digest);

/// Incremental SHA-256 over length-delimited fields.
class DigestBuilder
{
public:
  DigestBuilder &add(std::span<std::uint8_t const> data);
  DigestBuilder &add(std::string_view text);
  DigestBuilder &add(Digest const &digest);
  DigestBuilder &add_u64(std::uint64_t value);
  DigestBuilder &add_i64(std::int64_t value);

  Digest finish() const;

private:
  Bytes buffer_;
};

}  // namespace monadring
