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

#include "monadring/shamir.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace monadring::shamir {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0)
  {
    if (exp & 1)
    {
      result = mulmod(result, base, m);
    }
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::vector<Share> distinct_prefix(std::span<Share const> shares, std::size_t threshold)
{
  std::set<std::uint64_t> seen;
  std::vector<Share>      out;
  for (auto const &s : shares)
  {
    if (!seen.insert(s.x).second)
    {
      throw DuplicatePoint("duplicate evaluation point " + std::to_string(s.x));
    }
    if (out.size() < threshold)
    {
      out.push_back(s);
    }
  }
  if (out.size() < threshold)
  {
    throw InsufficientShares("need " + std::to_string(threshold) + " shares, got " +
                             std::to_string(out.size()));
  }
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n)
{
  if (n < 2)
  {
    return false;
  }
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL})
  {
    if (n % p == 0)
    {
      return n == p;
    }
  }
  std::uint64_t d = n - 1;
  int           r = 0;
  while ((d & 1) == 0)
  {
    d >>= 1;
    ++r;
  }
  // these bases are deterministic for all 64-bit n
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL})
  {
    auto x = powmod(a, d, n);
    if (x == 1 || x == n - 1)
    {
      continue;
    }
    bool composite = true;
    for (int i = 1; i < r; ++i)
    {
      x = mulmod(x, x, n);
      if (x == n - 1)
      {
        composite = false;
        break;
      }
    }
    if (composite)
    {
      return false;
    }
  }
  return true;
}

// ---- field -----------------------------------------------------------------

Field::Field(std::uint64_t prime)
  : p_{prime}
{
  if (!is_prime(prime))
  {
    throw InvalidArgument("field modulus " + std::to_string(prime) + " is not prime");
  }
}

std::uint64_t Field::add(std::uint64_t a, std::uint64_t b) const
{
  auto const s = static_cast<unsigned __int128>(a) + b;
  return static_cast<std::uint64_t>(s % p_);
}

std::uint64_t Field::sub(std::uint64_t a, std::uint64_t b) const
{
  return a >= b ? (a - b) % p_ : p_ - (b - a) % p_;
}

std::uint64_t Field::mul(std::uint64_t a, std::uint64_t b) const
{
  return mulmod(a, b, p_);
}

std::uint64_t Field::pow(std::uint64_t base, std::uint64_t exp) const
{
  return powmod(base, exp, p_);
}

std::uint64_t Field::inverse(std::uint64_t a) const
{
  if (a % p_ == 0)
  {
    throw DomainError("zero has no inverse");
  }
  return powmod(a, p_ - 2, p_);
}

std::uint64_t Field::from_signed(std::int64_t v) const
{
  auto const m = static_cast<__int128>(p_);
  __int128   r = v % m;
  if (r < 0)
  {
    r += m;
  }
  return static_cast<std::uint64_t>(r);
}

std::int64_t Field::to_signed(std::uint64_t v) const
{
  return v > p_ / 2 ? -static_cast<std::int64_t>(p_ - v) : static_cast<std::int64_t>(v);
}

// ---- policy ----------------------------------------------------------------

namespace {

std::vector<std::uint64_t> index_points(std::size_t n)
{
  std::vector<std::uint64_t> out(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    out[i] = i + 1;
  }
  return out;
}

}  // namespace

SharingPolicy::SharingPolicy(std::size_t n, std::size_t t)
  : SharingPolicy(t, index_points(n))
{}

SharingPolicy::SharingPolicy(std::size_t t, std::vector<std::uint64_t> points)
  : t_{t}
  , points_{std::move(points)}
{
  if (t_ < 1 || t_ > points_.size())
  {
    throw InvalidArgument("threshold must satisfy 1 <= t <= n");
  }
  std::set<std::uint64_t> seen;
  for (auto x : points_)
  {
    if (x == 0)
    {
      throw InvalidArgument("evaluation point 0 would reveal the secret");
    }
    if (!seen.insert(x).second)
    {
      throw InvalidArgument("evaluation points must be distinct");
    }
  }
}

// ---- sharing ---------------------------------------------------------------

std::uint64_t lagrange_at_zero(Field const &field, std::span<std::uint64_t const> points,
                               std::size_t i)
{
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  for (std::size_t j = 0; j < points.size(); ++j)
  {
    if (j == i)
    {
      continue;
    }
    // (0 - x_j) / (x_i - x_j)
    num = field.mul(num, field.sub(0, points[j] % field.prime()));
    den = field.mul(den, field.sub(points[i] % field.prime(), points[j] % field.prime()));
  }
  return field.mul(num, field.inverse(den));
}

std::vector<Share> share_with_coefficients(std::span<std::uint64_t const> coefficients,
                                           SharingPolicy const &policy, Field const &field)
{
  if (coefficients.size() != policy.t())
  {
    throw InvalidArgument("need exactly t coefficients");
  }
  for (auto a : coefficients)
  {
    if (a >= field.prime())
    {
      throw InvalidArgument("coefficient outside the field");
    }
  }
  for (auto x : policy.points())
  {
    if (x % field.prime() == 0)
    {
      throw InvalidArgument("evaluation point vanishes in the field");
    }
  }
  std::vector<Share> out;
  out.reserve(policy.n());
  for (auto x : policy.points())
  {
    // Horner
    std::uint64_t y = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
    {
      y = field.add(field.mul(y, x % field.prime()), *it);
    }
    out.push_back(Share{x, y});
  }
  return out;
}

std::vector<Share> share(std::uint64_t secret, SharingPolicy const &policy, Field const &field,
                         Rng &rng)
{
  if (secret >= field.prime())
  {
    throw InvalidArgument("secret outside the field");
  }
  std::vector<std::uint64_t> coefficients(policy.t());
  coefficients[0] = secret;
  for (std::size_t k = 1; k < coefficients.size(); ++k)
  {
    coefficients[k] = rng.below(field.prime());
  }
  return share_with_coefficients(coefficients, policy, field);
}

std::uint64_t reconstruct(std::span<Share const> shares, std::size_t threshold, Field const &field)
{
  if (threshold == 0)
  {
    throw InvalidArgument("threshold must be positive");
  }
  auto const used = distinct_prefix(shares, threshold);

  std::vector<std::uint64_t> points;
  points.reserve(used.size());
  for (auto const &s : used)
  {
    points.push_back(s.x);
  }
  std::uint64_t secret = 0;
  for (std::size_t i = 0; i < used.size(); ++i)
  {
    secret = field.add(secret, field.mul(used[i].y, lagrange_at_zero(field, points, i)));
  }
  return secret;
}

// ---- resharing -------------------------------------------------------------

ReshareResult reshare(std::span<Share const> old_shares, std::size_t old_threshold,
                      SharingPolicy const &new_policy, Field const &field, Rng &rng)
{
  // validates count and duplicates
  (void)distinct_prefix(old_shares, old_threshold);

  ReshareMatrix m;
  m.old_threshold = old_threshold;
  m.new_threshold = new_policy.t();
  m.new_points    = new_policy.points();
  for (auto const &s : old_shares)
  {
    m.old_points.push_back(s.x);
    auto const row = share(s.y, new_policy, field, rng);
    std::vector<std::uint64_t> cells;
    cells.reserve(row.size());
    for (auto const &r : row)
    {
      cells.push_back(r.y);
    }
    m.cells.push_back(std::move(cells));
  }

  std::vector<std::size_t> rows(old_threshold);
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    rows[i] = i;
  }
  ReshareResult result{std::move(m), {}};
  for (std::size_t j = 0; j < result.matrix.new_points.size(); ++j)
  {
    result.new_shares.push_back(combine_column(result.matrix, j, rows, field));
  }
  return result;
}

Share combine_column(ReshareMatrix const &m, std::size_t column, std::span<std::size_t const> rows,
                     Field const &field)
{
  if (rows.size() < m.old_threshold)
  {
    throw InsufficientShares("need " + std::to_string(m.old_threshold) + " rows, got " +
                             std::to_string(rows.size()));
  }
  if (column >= m.new_points.size())
  {
    throw InvalidArgument("column out of range");
  }
  std::vector<std::uint64_t> points;
  for (auto r : rows)
  {
    if (r >= m.old_points.size())
    {
      throw InvalidArgument("row out of range");
    }
    if (std::find(points.begin(), points.end(), m.old_points[r]) != points.end())
    {
      throw DuplicatePoint("row listed twice");
    }
    points.push_back(m.old_points[r]);
  }
  std::uint64_t y = 0;
  for (std::size_t k = 0; k < rows.size(); ++k)
  {
    y = field.add(y, field.mul(lagrange_at_zero(field, points, k), m.cells[rows[k]][column]));
  }
  return Share{m.new_points[column], y};
}

std::uint64_t reconstruct_from_submatrix(ReshareMatrix const &m, std::span<std::size_t const> rows,
                                         std::span<std::size_t const> columns, Field const &field)
{
  std::vector<Share> shares;
  shares.reserve(columns.size());
  for (auto c : columns)
  {
    shares.push_back(combine_column(m, c, rows, field));
  }
  return reconstruct(shares, m.new_threshold, field);
}

// ---- share files -----------------------------------------------------------

void write_share_file(std::ostream &out, Field const &field, SharingPolicy const &policy,
                      std::span<Share const> shares)
{
  out << field.prime() << ' ' << policy.n() << ' ' << policy.t() << '\n';
  for (auto const &s : shares)
  {
    out << s.x << ' ' << s.y << '\n';
  }
}

ShareFile read_share_file(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw DecodeError("share file: missing header");
  }
  std::istringstream header{line};
  std::uint64_t      prime = 0;
  std::size_t        n = 0, t = 0;
  if (!(header >> prime >> n >> t))
  {
    throw DecodeError("share file: header must be 'P n t'");
  }
  ShareFile file{Field{prime}, n, t, {}};
  while (std::getline(in, line))
  {
    if (line.empty())
    {
      continue;
    }
    std::istringstream row{line};
    Share              s{};
    if (!(row >> s.x >> s.y) || s.y >= prime)
    {
      throw DecodeError("share file: bad share line '" + line + "'");
    }
    file.shares.push_back(s);
  }
  return file;
}

}  // namespace monadring::shamir
