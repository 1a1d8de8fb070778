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


#include "monadring/blind_voting.hpp"

#include "monadring/wire.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace monadring::blind {

namespace {

std::vector<KeyShareBundle> share_secret_key(fhe::SecretKey const &sk, std::uint64_t key_id,
                                             shamir::SharingPolicy const &policy,
                                             shamir::Field const &field, Rng &rng)
{
  std::vector<KeyShareBundle> bundles(policy.n());
  for (std::size_t h = 0; h < policy.n(); ++h)
  {
    bundles[h].key_id = key_id;
    bundles[h].x      = policy.points()[h];
    bundles[h].coeffs.reserve(sk.s.coeffs.size());
  }
  for (auto c : sk.s.coeffs)
  {
    auto const shares = shamir::share(field.from_signed(c), policy, field, rng);
    for (std::size_t h = 0; h < shares.size(); ++h)
    {
      bundles[h].coeffs.push_back(shares[h].y);
    }
  }
  return bundles;
}

Digest recomputation_digest(DecryptionTranscript const &t)
{
  DigestBuilder b;
  b.add(std::string_view{"monadring/transcript/1"});
  b.add(t.ciphertext_digest);
  for (std::size_t i = 0; i < t.share_points.size(); ++i)
  {
    b.add_u64(t.share_points[i]);
    b.add(t.share_digests[i]);
  }
  b.add_u64(t.plaintext);
  return b.finish();
}

}  // namespace

Digest KeyShareBundle::digest() const
{
  DigestBuilder b;
  b.add_u64(key_id).add_u64(x).add_u64(coeffs.size());
  for (auto c : coeffs)
  {
    b.add_u64(c);
  }
  return b.finish();
}

Digest ciphertext_digest(fhe::Ciphertext const &ct)
{
  return sha256(fhe::serialize(ct));
}

Round setup_round(std::size_t n, std::size_t t, fhe::FheParams const &params, Rng &rng)
{
  if (t < 2 || t > n)
  {
    throw InvalidArgument("blind voting needs 2 <= t <= n");
  }
  shamir::Field const         field;
  shamir::SharingPolicy const policy{n, t};

  std::vector<PlayerCrypto> players;
  players.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    auto keys   = fhe::generate_keys(params, rng);
    auto shares = share_secret_key(keys.secret, i, policy, field, rng);
    players.push_back(PlayerCrypto{i, std::move(keys), std::move(shares)});
  }

  auto agg_keys = fhe::generate_keys(params, rng);
  auto agg_shares = share_secret_key(agg_keys.secret, kAggregationKeyId, policy, field, rng);
  AggregationKey aggregation{agg_keys.pub, std::move(agg_shares)};

  auto const stream_seed = rng.next_u64();
  return Round{n, t, params, field, policy, std::move(players), std::move(aggregation),
               stream_seed};
}

EncryptedStrategy encrypt_strategy(Round const &round, std::uint64_t player, game::Vote vote,
                                   std::uint64_t nonce)
{
  if (player >= round.n)
  {
    throw InvalidArgument("unknown player " + std::to_string(player));
  }
  auto       rng = Rng::derive(round.stream_seed, "ballot/" + std::to_string(player), nonce);
  auto const m   = fhe::Plaintext::constant(vote == game::Vote::Top ? 1 : 0,
                                            round.params.ring_degree());
  return EncryptedStrategy{player, kAggregationKeyId, nonce,
                           fhe::encrypt(round.aggregation.pub, m, round.params, rng)};
}

fhe::Ciphertext homomorphic_tally(std::span<EncryptedStrategy const> strategies,
                                  std::span<std::uint64_t const> weights)
{
  if (strategies.empty())
  {
    throw InvalidArgument("nothing to tally");
  }
  if (weights.size() != strategies.size())
  {
    throw InvalidArgument("one weight per ballot");
  }
  auto const &params = strategies.front().ct.params;
  std::optional<fhe::Ciphertext> acc;
  for (std::size_t i = 0; i < strategies.size(); ++i)
  {
    auto const &s = strategies[i];
    if (s.key_id != kAggregationKeyId)
    {
      throw ParamsMismatch("ballot of player " + std::to_string(s.player) +
                           " is not under the aggregation key");
    }
    if (weights[i] >= params.plaintext_modulus())
    {
      throw InvalidArgument("weight must be below the plaintext modulus");
    }
    auto term = fhe::hom_mul_plain(
        s.ct, fhe::Plaintext::constant(static_cast<std::int64_t>(weights[i]), params.ring_degree()));
    acc = acc ? fhe::hom_add(*acc, term) : std::move(term);
  }
  return *acc;
}

fhe::SecretKey reconstruct_key(std::span<KeyShareBundle const> bundles, std::size_t threshold,
                               shamir::Field const &field, std::size_t ring_degree,
                               std::uint64_t ciphertext_modulus)
{
  if (bundles.size() < threshold)
  {
    throw InsufficientShares("need " + std::to_string(threshold) + " key share bundles, got " +
                             std::to_string(bundles.size()));
  }
  for (auto const &b : bundles)
  {
    if (b.key_id != bundles.front().key_id)
    {
      throw InvalidArgument("bundles belong to different keys");
    }
    if (b.coeffs.size() != ring_degree)
    {
      throw InvalidArgument("bundle length does not match the ring degree");
    }
  }
  fhe::SecretKey sk{fhe::RingElement::zero(ring_degree, ciphertext_modulus)};
  std::vector<shamir::Share> column(bundles.size());
  for (std::size_t k = 0; k < ring_degree; ++k)
  {
    for (std::size_t h = 0; h < bundles.size(); ++h)
    {
      column[h] = shamir::Share{bundles[h].x, bundles[h].coeffs[k]};
    }
    sk.s.coeffs[k] = field.to_signed(shamir::reconstruct(column, threshold, field));
  }
  return sk;
}

std::vector<KeyShareBundle> reshare_bundles(std::span<KeyShareBundle const> old_bundles,
                                            std::size_t old_threshold,
                                            shamir::SharingPolicy const &new_policy,
                                            shamir::Field const &field, Rng &rng)
{
  if (old_bundles.size() < old_threshold)
  {
    throw InsufficientShares("need " + std::to_string(old_threshold) +
                             " key share bundles, got " + std::to_string(old_bundles.size()));
  }
  auto const degree = old_bundles.front().coeffs.size();
  for (auto const &b : old_bundles)
  {
    if (b.key_id != old_bundles.front().key_id || b.coeffs.size() != degree)
    {
      throw InvalidArgument("bundles belong to different keys");
    }
  }
  std::vector<KeyShareBundle> out;
  for (auto x : new_policy.points())
  {
    out.push_back(KeyShareBundle{old_bundles.front().key_id, x, std::vector<std::uint64_t>(degree)});
  }
  std::vector<shamir::Share> column(old_bundles.size());
  for (std::size_t k = 0; k < degree; ++k)
  {
    for (std::size_t h = 0; h < old_bundles.size(); ++h)
    {
      column[h] = shamir::Share{old_bundles[h].x, old_bundles[h].coeffs[k]};
    }
    auto const moved = shamir::reshare(column, old_threshold, new_policy, field, rng);
    for (std::size_t j = 0; j < out.size(); ++j)
    {
      out[j].coeffs[k] = moved.new_shares[j].y;
    }
  }
  return out;
}

Opening threshold_decrypt(fhe::Ciphertext const &ct, std::span<KeyShareBundle const> bundles,
                          std::size_t threshold, shamir::Field const &field)
{
  if (bundles.size() < threshold)
  {
    throw InsufficientShares("need " + std::to_string(threshold) + " key share bundles, got " +
                             std::to_string(bundles.size()));
  }
  std::set<std::uint64_t> seen;
  for (auto const &b : bundles)
  {
    if (!seen.insert(b.x).second)
    {
      throw DuplicatePoint("bundle point " + std::to_string(b.x) + " listed twice");
    }
  }
  auto const used = bundles.first(threshold);
  auto const sk   = reconstruct_key(used, threshold, field, ct.params.ring_degree(),
                                    ct.params.ciphertext_modulus());
  auto const m    = fhe::decrypt(sk, ct);

  DecryptionTranscript t;
  t.ciphertext_digest = ciphertext_digest(ct);
  for (auto const &b : used)
  {
    t.share_points.push_back(b.x);
    t.share_digests.push_back(b.digest());
  }
  t.plaintext            = static_cast<std::uint64_t>(m.coeffs.front());
  t.recomputation_digest = recomputation_digest(t);
  return Opening{t.plaintext, std::move(t)};
}

bool verify(DecryptionTranscript const &transcript, fhe::Ciphertext const &ct,
            std::span<KeyShareBundle const> bundles, std::size_t threshold,
            shamir::Field const &field)
{
  if (transcript.share_points.size() != threshold ||
      transcript.share_digests.size() != threshold)
  {
    return false;
  }
  if (recomputation_digest(transcript) != transcript.recomputation_digest ||
      ciphertext_digest(ct) != transcript.ciphertext_digest)
  {
    return false;
  }
  std::vector<KeyShareBundle> listed;
  for (std::size_t i = 0; i < threshold; ++i)
  {
    auto it = std::find_if(bundles.begin(), bundles.end(), [&](KeyShareBundle const &b) {
      return b.x == transcript.share_points[i];
    });
    if (it == bundles.end() || it->digest() != transcript.share_digests[i])
    {
      return false;
    }
    listed.push_back(*it);
  }
  try
  {
    auto const again = threshold_decrypt(ct, listed, threshold, field);
    return again.plaintext == transcript.plaintext &&
           again.transcript.recomputation_digest == transcript.recomputation_digest;
  }
  catch (Error const &)
  {
    return false;
  }
}

std::string DecryptionTranscript::to_text() const
{
  std::ostringstream out;
  out << "ciphertext " << to_hex(ciphertext_digest) << '\n';
  for (std::size_t i = 0; i < share_points.size(); ++i)
  {
    out << "share x=" << share_points[i] << ' ' << to_hex(share_digests[i]) << '\n';
  }
  out << "plaintext " << plaintext << '\n';
  out << "recomputation " << to_hex(recomputation_digest) << '\n';
  return out.str();
}

namespace testing {

std::uint64_t open_single_ballot(EncryptedStrategy const &ballot,
                                 fhe::SecretKey const &aggregation_secret)
{
  return static_cast<std::uint64_t>(fhe::decrypt(aggregation_secret, ballot.ct).coeffs.front());
}

}  // namespace testing

}  // namespace monadring::blind
