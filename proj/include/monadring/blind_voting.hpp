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


// Blind voting: ballots encrypted under a round aggregation key whose secret
// is Shamir-shared among the members, tallied homomorphically and opened by
// threshold decryption with a recomputable transcript.

#include "monadring/digest.hpp"
#include "monadring/fhe.hpp"
#include "monadring/shamir.hpp"
#include "monadring/voting_game.hpp"

namespace monadring::blind {

/// One holder's Shamir shares of every secret-key coefficient of one key.
struct KeyShareBundle
{
  std::uint64_t              key_id;  // player id, or kAggregationKeyId
  std::uint64_t              x;       // holder's evaluation point
  std::vector<std::uint64_t> coeffs;  // share of each coefficient

  Digest digest() const;
};

inline constexpr std::uint64_t kAggregationKeyId = 0xffffffffULL;

struct PlayerCrypto
{
  std::uint64_t               player;
  fhe::FheKeys                keys;
  std::vector<KeyShareBundle> shares;  // shares[h] goes to holder h
};

struct AggregationKey
{
  fhe::PublicKey              pub;
  std::vector<KeyShareBundle> shares;  // shares[h] goes to holder h
};

struct Round
{
  std::size_t               n;
  std::size_t               t;
  fhe::FheParams            params;
  shamir::Field             field;
  shamir::SharingPolicy     policy;
  std::vector<PlayerCrypto> players;
  AggregationKey            aggregation;
  std::uint64_t             stream_seed;  // per-ballot encryption randomness
};

/// n player key pairs plus the aggregation key, each shared t-of-n at points
/// 1..n. Throws InvalidArgument unless 2 <= t <= n.
Round setup_round(std::size_t n, std::size_t t, fhe::FheParams const &params, Rng &rng);

struct EncryptedStrategy
{
  std::uint64_t   player;
  std::uint64_t   key_id;
  std::uint64_t   nonce;
  fhe::Ciphertext ct;
};

/// Top encodes as the constant polynomial 1, Bot as 0, under the aggregation key.
EncryptedStrategy encrypt_strategy(Round const &round, std::uint64_t player, game::Vote vote,
                                   std::uint64_t nonce);

/// Ciphertext of sum w_i * vote_i. Throws ParamsMismatch when a ballot is
/// not under the aggregation key, InvalidArgument on bad weights.
fhe::Ciphertext homomorphic_tally(std::span<EncryptedStrategy const> strategies,
                                  std::span<std::uint64_t const> weights);

struct DecryptionTranscript
{
  Digest                     ciphertext_digest;
  std::vector<std::uint64_t> share_points;
  std::vector<Digest>        share_digests;
  std::uint64_t              plaintext;
  Digest                     recomputation_digest;

  std::string to_text() const;
};

struct Opening
{
  std::uint64_t        plaintext;
  DecryptionTranscript transcript;
};

/// Rebuilds the aggregation secret from the first t bundles and decrypts the
/// constant coefficient. Throws InsufficientShares, DuplicatePoint, NoiseOverflow.
Opening threshold_decrypt(fhe::Ciphertext const &ct, std::span<KeyShareBundle const> bundles,
                          std::size_t threshold, shamir::Field const &field);

/// True iff the listed shares, taken from `bundles`, decrypt `ct` to the
/// recorded plaintext and every digest matches.
bool verify(DecryptionTranscript const &transcript, fhe::Ciphertext const &ct,
            std::span<KeyShareBundle const> bundles, std::size_t threshold,
            shamir::Field const &field);

/// Rebuild a secret key from t bundles of the same key.
fhe::SecretKey reconstruct_key(std::span<KeyShareBundle const> bundles, std::size_t threshold,
                               shamir::Field const &field, std::size_t ring_degree,
                               std::uint64_t ciphertext_modulus);

/// Moves a key's shares to a new holder set without reconstructing it: the
/// first t old bundles are reshared coefficient by coefficient.
std::vector<KeyShareBundle> reshare_bundles(std::span<KeyShareBundle const> old_bundles,
                                            std::size_t old_threshold,
                                            shamir::SharingPolicy const &new_policy,
                                            shamir::Field const &field, Rng &rng);

Digest ciphertext_digest(fhe::Ciphertext const &ct);

namespace testing {

/// Individual-ballot decryption with the intact aggregation key. Test-only.
std::uint64_t open_single_ballot(EncryptedStrategy const &ballot,
                                 fhe::SecretKey const &aggregation_secret);

}  // namespace testing

}  // namespace monadring::blind
