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

// Desk-scale BFV over Z_q[X]/(X^N+1).
//
// Noise accounting. For a ciphertext (c0, c1) of plaintext m under secret s,
//
//   [c0 + c1*s]_q = Delta*m + v,
//
// and `noise_budget` is a proven upper bound on |v|_inf. Decryption rounds
// correctly while |v|_inf < (q - p*r)/(2p) with r = q - p*Delta.
//
// With B = floor(6*sigma) the tail cut of the error sampler and delta_R = N,
// a fresh encryption has v = e*u + e0 + e1*s, hence
//
//   fresh bound = delta_R*B*1 + B + delta_R*B*1 = B*(2N + 1).
//
// hom_add adds the bounds and one r for the mod-p carry. hom_mul_plain by k
// multiplies by |k|_1 (<= delta_R*|k|_inf) and adds r*|k|_1 for the carries.
// These parameters are chosen for test speed, not security.

#include "monadring/common.hpp"
#include "monadring/rng.hpp"

#include <cstddef>
#include <optional>

namespace monadring::fhe {

class FheParams
{
public:
  /// Throws InvalidArgument unless N is a power of two >= 2, 2 <= p < q <= 2^62,
  /// floor(q/p) >= 2 and sigma > 0.
  FheParams(std::size_t ring_degree, std::uint64_t ciphertext_modulus,
            std::uint64_t plaintext_modulus, double gaussian_stddev);

  /// N=1024, q=2^54, p=2^16, sigma=3.2.
  static FheParams desk_default();

  std::size_t   ring_degree() const { return n_; }
  std::uint64_t ciphertext_modulus() const { return q_; }
  std::uint64_t plaintext_modulus() const { return p_; }
  std::uint64_t delta() const { return q_ / p_; }
  double        gaussian_stddev() const { return sigma_; }

  /// r_p(q) = q - p*Delta.
  std::uint64_t plain_remainder() const { return q_ - p_ * delta(); }

  /// Largest magnitude the error sampler emits, floor(6*sigma).
  std::int64_t noise_cutoff() const;

  /// Worst-case infinity-norm expansion factor of the ring, N.
  double expansion_factor() const { return static_cast<double>(n_); }

  /// (q - p*r) / (2p).
  double decryption_bound() const;

  double fresh_noise_bound() const;

  bool operator==(FheParams const &) const = default;

private:
  std::size_t   n_;
  std::uint64_t q_;
  std::uint64_t p_;
  double        sigma_;
};

/// Ring element with coefficients in the symmetric interval (-m/2, m/2].
struct RingElement
{
  std::vector<std::int64_t> coeffs;
  std::uint64_t             modulus{0};

  static RingElement zero(std::size_t n, std::uint64_t modulus);

  std::int64_t infinity_norm() const;

  bool operator==(RingElement const &) const = default;
};

/// Reduce an arbitrary integer into (-m/2, m/2].
std::int64_t reduce_symmetric(__int128 value, std::uint64_t modulus);

RingElement add(RingElement const &a, RingElement const &b);
RingElement sub(RingElement const &a, RingElement const &b);
RingElement negate(RingElement const &a);

/// Negacyclic product, X^N = -1. Schoolbook O(N^2).
RingElement multiply(RingElement const &a, RingElement const &b);

/// Plaintext coefficients in [0, p).
struct Plaintext
{
  std::vector<std::int64_t> coeffs;

  static Plaintext constant(std::int64_t value, std::size_t n);

  bool operator==(Plaintext const &) const = default;
};

struct SecretKey
{
  RingElement s;
};

struct PublicKey
{
  RingElement p0;
  RingElement p1;
};

struct FheKeys
{
  SecretKey secret;
  PublicKey pub;
};

struct Ciphertext
{
  RingElement c0;
  RingElement c1;
  double      noise_budget{0.0};
  FheParams   params;
};

SecretKey secret_key_gen(FheParams const &params, Rng &rng);
PublicKey public_key_gen(SecretKey const &sk, FheParams const &params, Rng &rng);
FheKeys   generate_keys(FheParams const &params, Rng &rng);

/// Throws InvalidArgument if any coefficient of m is outside [0, p).
Ciphertext encrypt(PublicKey const &pk, Plaintext const &m, FheParams const &params, Rng &rng);

/// Throws NoiseOverflow if the tracked budget reaches the decryption bound.
Plaintext decrypt(SecretKey const &sk, Ciphertext const &ct);

struct DiagnosticDecryption
{
  Plaintext plaintext;
  bool      reliable;
};

/// Always decrypts; `reliable` is false when the budget is over the bound.
DiagnosticDecryption decrypt_diagnostic(SecretKey const &sk, Ciphertext const &ct);

Ciphertext hom_add(Ciphertext const &a, Ciphertext const &b);
Ciphertext hom_mul_plain(Ciphertext const &ct, Plaintext const &k);

/// |[c0 + c1*s]_q - Delta*m|_inf, the realised noise for a known plaintext.
std::int64_t measured_noise(SecretKey const &sk, Ciphertext const &ct, Plaintext const &m);

/// Trivial noiseless encoding (Delta*m, 0).
Ciphertext trivial_encrypt(Plaintext const &m, FheParams const &params);

// Serialization, MNR1 framed. Body: params header (u32 N, u64 q, u64 p,
// f64 sigma) followed by u32-length-prefixed little-endian i64 coefficients.
Bytes serialize(SecretKey const &sk, FheParams const &params);
Bytes serialize(PublicKey const &pk, FheParams const &params);
Bytes serialize(Ciphertext const &ct);

std::pair<FheParams, SecretKey> deserialize_secret_key(std::span<std::uint8_t const> data);
std::pair<FheParams, PublicKey> deserialize_public_key(std::span<std::uint8_t const> data);
Ciphertext                      deserialize_ciphertext(std::span<std::uint8_t const> data);

namespace detail {

/// Discrete Gaussian with tail cut at noise_cutoff().
std::int64_t sample_gaussian(double sigma, std::int64_t cutoff, Rng &rng);

/// pk = ([-a*s + e]_q, a) for caller-chosen a and e.
PublicKey public_key_from(SecretKey const &sk, RingElement const &a, RingElement const &e);

}  // namespace detail

}  // namespace monadring::fhe
