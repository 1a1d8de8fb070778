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

#include "monadring/fhe.hpp"
#include "monadring/wire.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace monadring::fhe {

namespace {

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

void require_same_shape(RingElement const &a, RingElement const &b)
{
  if (a.modulus != b.modulus || a.coeffs.size() != b.coeffs.size())
  {
    throw ParamsMismatch("ring elements from different rings");
  }
}

void require_same_params(Ciphertext const &a, Ciphertext const &b)
{
  if (!(a.params == b.params))
  {
    throw ParamsMismatch("ciphertexts under different parameters");
  }
}

RingElement sample_ternary(std::size_t n, std::uint64_t modulus, Rng &rng)
{
  auto out = RingElement::zero(n, modulus);
  for (auto &c : out.coeffs)
  {
    c = static_cast<std::int64_t>(rng.below(3)) - 1;
  }
  return out;
}

RingElement sample_error(FheParams const &params, Rng &rng)
{
  auto out = RingElement::zero(params.ring_degree(), params.ciphertext_modulus());
  for (auto &c : out.coeffs)
  {
    c = detail::sample_gaussian(params.gaussian_stddev(), params.noise_cutoff(), rng);
  }
  return out;
}

RingElement sample_uniform(std::size_t n, std::uint64_t modulus, Rng &rng)
{
  auto out = RingElement::zero(n, modulus);
  for (auto &c : out.coeffs)
  {
    c = reduce_symmetric(static_cast<__int128>(rng.below(modulus)), modulus);
  }
  return out;
}

void check_plaintext(Plaintext const &m, FheParams const &params)
{
  if (m.coeffs.size() != params.ring_degree())
  {
    throw InvalidArgument("plaintext has wrong ring degree");
  }
  auto const p = static_cast<std::int64_t>(params.plaintext_modulus());
  for (auto c : m.coeffs)
  {
    if (c < 0 || c >= p)
    {
      throw InvalidArgument("plaintext coefficient outside [0, p)");
    }
  }
}

/// Delta*m lifted into R_q.
RingElement scale_plaintext(Plaintext const &m, FheParams const &params)
{
  auto out = RingElement::zero(params.ring_degree(), params.ciphertext_modulus());
  auto const delta = static_cast<__int128>(params.delta());
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
  {
    out.coeffs[i] = reduce_symmetric(delta * m.coeffs[i], params.ciphertext_modulus());
  }
  return out;
}

/// Plaintext lifted to its centered representative mod p.
RingElement centered_plaintext(Plaintext const &k, FheParams const &params)
{
  auto out = RingElement::zero(params.ring_degree(), params.ciphertext_modulus());
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
  {
    out.coeffs[i] = reduce_symmetric(k.coeffs[i], params.plaintext_modulus());
  }
  return out;
}

RingElement phase(SecretKey const &sk, Ciphertext const &ct)
{
  if (sk.s.coeffs.size() != ct.c1.coeffs.size())
  {
    throw ParamsMismatch("secret key and ciphertext ring degree differ");
  }
  auto s = sk.s;
  s.modulus = ct.c1.modulus;
  return add(ct.c0, multiply(ct.c1, s));
}

Plaintext round_to_plaintext(RingElement const &x, FheParams const &params)
{
  auto const q = static_cast<__int128>(params.ciphertext_modulus());
  auto const p = static_cast<__int128>(params.plaintext_modulus());
  Plaintext  out;
  out.coeffs.resize(x.coeffs.size());
  for (std::size_t i = 0; i < x.coeffs.size(); ++i)
  {
    // round(p*x/q) = floor((2*p*x + q) / (2q)), with floor toward -inf
    __int128 const num = 2 * p * x.coeffs[i] + q;
    __int128 const den = 2 * q;
    __int128       quo = num / den;
    if ((num % den != 0) && (num < 0))
    {
      --quo;
    }
    auto r = static_cast<std::int64_t>(quo % p);
    if (r < 0)
    {
      r += static_cast<std::int64_t>(p);
    }
    out.coeffs[i] = r;
  }
  return out;
}

void write_params(wire::ByteWriter &w, FheParams const &params)
{
  w.u32(static_cast<std::uint32_t>(params.ring_degree()));
  w.u64(params.ciphertext_modulus());
  w.u64(params.plaintext_modulus());
  w.f64(params.gaussian_stddev());
}

FheParams read_params(wire::ByteReader &r)
{
  auto const n     = r.u32();
  auto const q     = r.u64();
  auto const p     = r.u64();
  auto const sigma = r.f64();
  try
  {
    return FheParams{n, q, p, sigma};
  }
  catch (InvalidArgument const &e)
  {
    throw DecodeError(std::string{"invalid params header: "} + e.what());
  }
}

void write_element(wire::ByteWriter &w, RingElement const &e)
{
  w.u32(static_cast<std::uint32_t>(e.coeffs.size()));
  for (auto c : e.coeffs)
  {
    w.i64(c);
  }
}

RingElement read_element(wire::ByteReader &r, FheParams const &params, std::uint64_t modulus)
{
  auto const len = r.u32();
  if (len != params.ring_degree())
  {
    throw DecodeError("ring element length does not match params header");
  }
  auto out = RingElement::zero(len, modulus);
  for (auto &c : out.coeffs)
  {
    c = r.i64();
    if (reduce_symmetric(c, modulus) != c)
    {
      throw DecodeError("coefficient outside symmetric range");
    }
  }
  return out;
}

wire::ByteReader open_frame(wire::Frame const &frame)
{
  return wire::ByteReader{frame.body};
}

}  // namespace

// ---- params ----------------------------------------------------------------

FheParams::FheParams(std::size_t ring_degree, std::uint64_t ciphertext_modulus,
                     std::uint64_t plaintext_modulus, double gaussian_stddev)
  : n_{ring_degree}
  , q_{ciphertext_modulus}
  , p_{plaintext_modulus}
  , sigma_{gaussian_stddev}
{
  if (n_ < 2 || !std::has_single_bit(n_))
  {
    throw InvalidArgument("ring degree must be a power of two >= 2");
  }
  if (q_ > kMaxModulus)
  {
    throw InvalidArgument("ciphertext modulus above 2^62");
  }
  if (p_ < 2 || p_ >= q_)
  {
    throw InvalidArgument("need 2 <= p < q");
  }
  if (q_ / p_ < 2)
  {
    throw InvalidArgument("Delta = floor(q/p) must be at least 2");
  }
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
  {
    throw InvalidArgument("gaussian stddev must be positive");
  }
}

FheParams FheParams::desk_default()
{
  return FheParams{1024, std::uint64_t{1} << 54, std::uint64_t{1} << 16, 3.2};
}

std::int64_t FheParams::noise_cutoff() const
{
  return static_cast<std::int64_t>(std::floor(6.0 * sigma_));
}

double FheParams::decryption_bound() const
{
  auto const num = static_cast<long double>(q_) -
                   static_cast<long double>(p_) * static_cast<long double>(plain_remainder());
  return static_cast<double>(num / (2.0L * static_cast<long double>(p_)));
}

double FheParams::fresh_noise_bound() const
{
  return static_cast<double>(noise_cutoff()) * (2.0 * expansion_factor() + 1.0);
}

// ---- ring arithmetic -------------------------------------------------------

RingElement RingElement::zero(std::size_t n, std::uint64_t modulus)
{
  return RingElement{std::vector<std::int64_t>(n, 0), modulus};
}

std::int64_t RingElement::infinity_norm() const
{
  std::int64_t best = 0;
  for (auto c : coeffs)
  {
    best = std::max(best, c < 0 ? -c : c);
  }
  return best;
}

std::int64_t reduce_symmetric(__int128 value, std::uint64_t modulus)
{
  auto const m = static_cast<__int128>(modulus);
  __int128   r = value % m;
  if (r < 0)
  {
    r += m;
  }
  // r in [0, m); fold the upper half down
  if (2 * r > m)
  {
    r -= m;
  }
  return static_cast<std::int64_t>(r);
}

RingElement add(RingElement const &a, RingElement const &b)
{
  require_same_shape(a, b);
  auto out = RingElement::zero(a.coeffs.size(), a.modulus);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
  {
    out.coeffs[i] = reduce_symmetric(static_cast<__int128>(a.coeffs[i]) + b.coeffs[i], a.modulus);
  }
  return out;
}

RingElement sub(RingElement const &a, RingElement const &b)
{
  require_same_shape(a, b);
  auto out = RingElement::zero(a.coeffs.size(), a.modulus);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
  {
    out.coeffs[i] = reduce_symmetric(static_cast<__int128>(a.coeffs[i]) - b.coeffs[i], a.modulus);
  }
  return out;
}

RingElement negate(RingElement const &a)
{
  auto out = a;
  for (auto &c : out.coeffs)
  {
    c = reduce_symmetric(-static_cast<__int128>(c), a.modulus);
  }
  return out;
}

RingElement multiply(RingElement const &a, RingElement const &b)
{
  require_same_shape(a, b);
  auto const            n = a.coeffs.size();
  std::vector<__int128> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i)
  {
    auto const ai = static_cast<__int128>(a.coeffs[i]);
    if (ai == 0)
    {
      continue;
    }
    // j < n - i wraps without sign change, the rest pick up X^N = -1
    std::size_t j = 0;
    for (; j < n - i; ++j)
    {
      acc[i + j] += ai * b.coeffs[j];
    }
    for (; j < n; ++j)
    {
      acc[i + j - n] -= ai * b.coeffs[j];
    }
  }
  auto out = RingElement::zero(n, a.modulus);
  for (std::size_t k = 0; k < n; ++k)
  {
    out.coeffs[k] = reduce_symmetric(acc[k], a.modulus);
  }
  return out;
}

Plaintext Plaintext::constant(std::int64_t value, std::size_t n)
{
  Plaintext out{std::vector<std::int64_t>(n, 0)};
  out.coeffs[0] = value;
  return out;
}

// ---- scheme ----------------------------------------------------------------

namespace detail {

std::int64_t sample_gaussian(double sigma, std::int64_t cutoff, Rng &rng)
{
  if (cutoff == 0)
  {
    return 0;
  }
  for (;;)
  {
    auto const   x      = rng.between(-cutoff, cutoff);
    double const weight = std::exp(-static_cast<double>(x * x) / (2.0 * sigma * sigma));
    if (rng.unit() < weight)
    {
      return x;
    }
  }
}

PublicKey public_key_from(SecretKey const &sk, RingElement const &a, RingElement const &e)
{
  auto s    = sk.s;
  s.modulus = a.modulus;
  return PublicKey{add(negate(multiply(a, s)), e), a};
}

}  // namespace detail

SecretKey secret_key_gen(FheParams const &params, Rng &rng)
{
  return SecretKey{sample_ternary(params.ring_degree(), params.ciphertext_modulus(), rng)};
}

PublicKey public_key_gen(SecretKey const &sk, FheParams const &params, Rng &rng)
{
  auto const a = sample_uniform(params.ring_degree(), params.ciphertext_modulus(), rng);
  auto const e = sample_error(params, rng);
  return detail::public_key_from(sk, a, e);
}

FheKeys generate_keys(FheParams const &params, Rng &rng)
{
  auto sk = secret_key_gen(params, rng);
  auto pk = public_key_gen(sk, params, rng);
  return FheKeys{std::move(sk), std::move(pk)};
}

Ciphertext encrypt(PublicKey const &pk, Plaintext const &m, FheParams const &params, Rng &rng)
{
  check_plaintext(m, params);
  if (pk.p0.coeffs.size() != params.ring_degree() ||
      pk.p0.modulus != params.ciphertext_modulus())
  {
    throw ParamsMismatch("public key does not match params");
  }
  auto const u  = sample_ternary(params.ring_degree(), params.ciphertext_modulus(), rng);
  auto const e0 = sample_error(params, rng);
  auto const e1 = sample_error(params, rng);

  Ciphertext ct{add(add(multiply(pk.p0, u), scale_plaintext(m, params)), e0),
                add(multiply(pk.p1, u), e1), params.fresh_noise_bound(), params};
  return ct;
}

DiagnosticDecryption decrypt_diagnostic(SecretKey const &sk, Ciphertext const &ct)
{
  auto const x = phase(sk, ct);
  return DiagnosticDecryption{round_to_plaintext(x, ct.params),
                              ct.noise_budget < ct.params.decryption_bound()};
}

Plaintext decrypt(SecretKey const &sk, Ciphertext const &ct)
{
  if (!(ct.noise_budget < ct.params.decryption_bound()))
  {
    throw NoiseOverflow("noise budget " + std::to_string(ct.noise_budget) +
                        " is not below the decryption bound " +
                        std::to_string(ct.params.decryption_bound()));
  }
  return decrypt_diagnostic(sk, ct).plaintext;
}

Ciphertext hom_add(Ciphertext const &a, Ciphertext const &b)
{
  require_same_params(a, b);
  return Ciphertext{add(a.c0, b.c0), add(a.c1, b.c1),
                    a.noise_budget + b.noise_budget +
                        static_cast<double>(a.params.plain_remainder()),
                    a.params};
}

Ciphertext hom_mul_plain(Ciphertext const &ct, Plaintext const &k)
{
  check_plaintext(k, ct.params);
  auto const lifted = centered_plaintext(k, ct.params);
  double     l1     = 0.0;
  for (auto c : lifted.coeffs)
  {
    l1 += static_cast<double>(c < 0 ? -c : c);
  }
  return Ciphertext{multiply(ct.c0, lifted), multiply(ct.c1, lifted),
                    ct.noise_budget * l1 + static_cast<double>(ct.params.plain_remainder()) * l1,
                    ct.params};
}

std::int64_t measured_noise(SecretKey const &sk, Ciphertext const &ct, Plaintext const &m)
{
  return sub(phase(sk, ct), scale_plaintext(m, ct.params)).infinity_norm();
}

Ciphertext trivial_encrypt(Plaintext const &m, FheParams const &params)
{
  check_plaintext(m, params);
  return Ciphertext{scale_plaintext(m, params),
                    RingElement::zero(params.ring_degree(), params.ciphertext_modulus()), 0.0,
                    params};
}

// ---- serialization ---------------------------------------------------------

Bytes serialize(SecretKey const &sk, FheParams const &params)
{
  wire::ByteWriter w;
  write_params(w, params);
  write_element(w, sk.s);
  return wire::frame(wire::RecordKind::SecretKey, w.data());
}

Bytes serialize(PublicKey const &pk, FheParams const &params)
{
  wire::ByteWriter w;
  write_params(w, params);
  write_element(w, pk.p0);
  write_element(w, pk.p1);
  return wire::frame(wire::RecordKind::PublicKey, w.data());
}

Bytes serialize(Ciphertext const &ct)
{
  wire::ByteWriter w;
  write_params(w, ct.params);
  write_element(w, ct.c0);
  write_element(w, ct.c1);
  w.f64(ct.noise_budget);
  return wire::frame(wire::RecordKind::Ciphertext, w.data());
}

std::pair<FheParams, SecretKey> deserialize_secret_key(std::span<std::uint8_t const> data)
{
  auto const frame = wire::unframe(data);
  if (frame.kind != wire::RecordKind::SecretKey)
  {
    throw DecodeError("record is not a secret key");
  }
  auto r      = open_frame(frame);
  auto params = read_params(r);
  auto s      = read_element(r, params, params.ciphertext_modulus());
  if (!r.done())
  {
    throw DecodeError("trailing bytes in secret key");
  }
  return {params, SecretKey{std::move(s)}};
}

std::pair<FheParams, PublicKey> deserialize_public_key(std::span<std::uint8_t const> data)
{
  auto const frame = wire::unframe(data);
  if (frame.kind != wire::RecordKind::PublicKey)
  {
    throw DecodeError("record is not a public key");
  }
  auto r      = open_frame(frame);
  auto params = read_params(r);
  auto p0     = read_element(r, params, params.ciphertext_modulus());
  auto p1     = read_element(r, params, params.ciphertext_modulus());
  if (!r.done())
  {
    throw DecodeError("trailing bytes in public key");
  }
  return {params, PublicKey{std::move(p0), std::move(p1)}};
}

Ciphertext deserialize_ciphertext(std::span<std::uint8_t const> data)
{
  auto const frame = wire::unframe(data);
  if (frame.kind != wire::RecordKind::Ciphertext)
  {
    throw DecodeError("record is not a ciphertext");
  }
  auto       r      = open_frame(frame);
  auto const params = read_params(r);
  auto       c0     = read_element(r, params, params.ciphertext_modulus());
  auto       c1     = read_element(r, params, params.ciphertext_modulus());
  auto const budget = r.f64();
  if (!r.done())
  {
    throw DecodeError("trailing bytes in ciphertext");
  }
  return Ciphertext{std::move(c0), std::move(c1), budget, params};
}

}  // namespace monadring::fhe
