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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monadring {

using Bytes  = std::vector<std::uint8_t>;
using NodeId = std::uint32_t;

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class ParamsMismatch : public Error
{
public:
  using Error::Error;
};

class NoiseOverflow : public Error
{
public:
  using Error::Error;
};

class InsufficientShares : public Error
{
public:
  using Error::Error;
};

class DuplicatePoint : public Error
{
public:
  using Error::Error;
};

class NoInteriorRoot : public Error
{
public:
  using Error::Error;
};

class NonConvergence : public Error
{
public:
  using Error::Error;
};

class DomainError : public Error
{
public:
  using Error::Error;
};

class DecodeError : public Error
{
public:
  using Error::Error;
};

class ScenarioError : public Error
{
public:
  using Error::Error;
};

std::string to_hex(std::span<std::uint8_t const> data);
Bytes       from_hex(std::string_view hex);
Bytes       to_bytes(std::string_view text);

}  // namespace monadring
