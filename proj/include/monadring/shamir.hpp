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
#include "monadring/rng.hpp"

#include <iosfwd>
#include <optional>

namespace monadring::shamir {

/// Prime field Z/PZ. Elements are canonical residues in [0, P).
class Field
{
public:
  /// Throws InvalidArgument unless `prime` is prime (deterministic Miller-Rabin).
  explicit Field(std::uint64_t prime = kMersenne61);

  static constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

  std::uint64_t prime() const { return p_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  std::uint64_t inverse(std::uint64_t a) const;

  /// Map a signed integer to its residue.
  std::uint64_t from_signed(std::int64_t v) const;
  /// Residue to the symmetric representative.
  std::int64_t to_signed(std::uint64_t v) const;

  bool operator==(Field const &) const = default;

private:
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

struct Share
{
  std::uint64_t x;
  std::uint64_t y;

  bool operator==(Share const &) const = default;
};

class SharingPolicy
{
public:
  /// Evaluation points 1..n.
  SharingPolicy(std::size_t n, std::size_t t);
  /// Throws InvalidArgument unless 1 <= t <= n, points distinct and nonzero.
  SharingPolicy(std::size_t t, std::vector<std::uint64_t> points);

  std::size_t                       n() const { return points_.size(); }
  std::size_t                       t() const { return t_; }
  std::vector<std::uint64_t> const &points() const { return points_; }

private:
  std::size_t                t_;
  std::vector<std::uint64_t> points_;
};

/// Lagrange weight of `points[i]` for evaluation at zero.
std::uint64_t lagrange_at_zero(Field const &field, std::span<std::uint64_t const> points,
                               std::size_t i);

/// Degree t-1 polynomial with constant term `secret`, random higher terms.
std::vector<Share> share(std::uint64_t secret, SharingPolicy const &policy, Field const &field,
                         Rng &rng);

/// Same, with caller-supplied coefficients a_0..a_{t-1} (a_0 is the secret).
std::vector<Share> share_with_coefficients(std::span<std::uint64_t const> coefficients,
                                           SharingPolicy const &policy, Field const &field);

/// P(0) from at least t shares. Only the first t distinct points are used.
/// Throws InsufficientShares, DuplicatePoint.
std::uint64_t reconstruct(std::span<Share const> shares, std::size_t threshold,
                          Field const &field);

/// Rows are old participants, columns new participants.
struct ReshareMatrix
{
  std::vector<std::uint64_t>              old_points;  // row labels
  std::vector<std::uint64_t>              new_points;  // column labels
  std::vector<std::vector<std::uint64_t>> cells;       // cells[i][j] = s'_{i,j}
  std::size_t                             old_threshold;
  std::size_t                             new_threshold;
};

struct ReshareResult
{
  ReshareMatrix      matrix;
  std::vector<Share> new_shares;
};

/// Each old holder re-shares its own share under `new_policy`; column j is
/// collapsed with the old-set Lagrange weights over the first t rows.
ReshareResult reshare(std::span<Share const> old_shares, std::size_t old_threshold,
                      SharingPolicy const &new_policy, Field const &field, Rng &rng);

/// New share of column `column` from the given rows (at least old_threshold).
Share combine_column(ReshareMatrix const &m, std::size_t column, std::span<std::size_t const> rows,
                     Field const &field);

/// Secret from a rows x columns submatrix, at least t x t'.
std::uint64_t reconstruct_from_submatrix(ReshareMatrix const &m, std::span<std::size_t const> rows,
                                         std::span<std::size_t const> columns, Field const &field);

// Share files: header line "P n t", then one "x y" line per share.
void               write_share_file(std::ostream &out, Field const &field, SharingPolicy const &policy,
                                    std::span<Share const> shares);
struct ShareFile
{
  Field              field;
  std::size_t        n;
  std::size_t        t;
  std::vector<Share> shares;
};
ShareFile read_share_file(std::istream &in);

}  // namespace monadring::shamir
