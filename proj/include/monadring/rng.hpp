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
#include <random>
#include <string_view>

namespace monadring {

/// Seeded randomness with platform-stable derived draws.
///
/// std::mt19937_64 output is fixed by the standard, the std distributions are
/// not, so every draw here is derived from raw engine words.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_{seed}
  {}

  /// Independent stream keyed by (seed, label, index).
  static Rng derive(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t next_u64()
  {
    return engine_();
  }

  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform in [lo, hi], inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit();

private:
  std::mt19937_64 engine_;
};

}  // namespace monadring
