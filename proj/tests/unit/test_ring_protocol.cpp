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


#include "monadring/ring_protocol.hpp"

#include "doctest.h"

#include <algorithm>

using namespace monadring;
using namespace monadring::ring;

namespace {

class FakeView : public HostnetView
{
public:
  std::map<NodeId, Bytes>       keys;
  std::optional<FunctionRecord> function;
  std::size_t                   joiners{0};

  std::optional<Bytes> node_key(NodeId node) const override
  {
    auto it = keys.find(node);
    if (it == keys.end())
    {
      return std::nullopt;
    }
    return it->second;
  }
  std::optional<FunctionRecord> latest_function(SubnetId) const override { return function; }
  std::size_t                   mid_round_joiners(SubnetId) const override { return joiners; }
};

blind::Round const &crypto_round()
{
  static auto const round = [] {
    Rng rng{99};
    return blind::setup_round(3, 2, fhe::FheParams::desk_default(), rng);
  }();
  return round;
}

Bytes key_of(NodeId id)
{
  return to_bytes("test-key-" + std::to_string(id));
}

struct Ring
{
  SubnetConfig           config;
  FakeView               view;
  std::vector<NodeState> nodes;

  explicit Ring(std::size_t n)
  {
    config.id      = 7;
    config.epsilon = 2;
    for (NodeId id = 1; id <= n; ++id)
    {
      config.nodelist.push_back(id);
      view.keys[id] = key_of(id);
      nodes.push_back(NodeState::create(id, SubnetLedger::launch(function_binary(1)), key_of(id)));
    }
    config.validate();
  }

  NodeState &at(NodeId id) { return nodes[*config.position_of(id)]; }

  /// Validate then advance; returns the report for inspection.
  Token hop(NodeId id, Token token, ValidationReport *out = nullptr)
  {
    auto &node   = at(id);
    auto  report = validate_token(node, token, config, view);
    if (!report.rejected_groups.empty() || !report.evidence.empty())
    {
      token = handle_conflict(node, std::move(token), report);
    }
    if (out)
    {
      *out = report;
    }
    return apply_and_advance(node, std::move(token), config);
  }

  /// One full circulation starting at the first member, all reports valid.
  Token round(Token token)
  {
    for (auto id : config.nodelist)
    {
      ValidationReport r;
      token = hop(id, std::move(token), &r);
      REQUIRE_MESSAGE(r.valid(), "violation at node ", id);
    }
    return token;
  }
};

std::vector<NodeId> composers(Token const &t)
{
  std::vector<NodeId> out;
  for (auto const &g : t.groups)
  {
    out.push_back(g.composer);
  }
  return out;
}

Group *group_of(Token &t, NodeId composer)
{
  for (auto &g : t.groups)
  {
    if (g.composer == composer)
    {
      return &g;
    }
  }
  return nullptr;
}

// q as a walk around the ring: n-1 at the composer, one less per member that
// applies it before the receiver.
std::int64_t walked_q(std::size_t n, std::size_t c, std::size_t r)
{
  std::int64_t q = static_cast<std::int64_t>(n) - 1;
  for (auto p = (c + 1) % n; p != r; p = (p + 1) % n)
  {
    --q;
  }
  return q;
}

}  // namespace

TEST_CASE("expected q matches a walk around the ring")
{
  for (std::size_t n = 3; n <= 9; ++n)
  {
    Ring ring{n};
    for (std::size_t c = 0; c < n; ++c)
    {
      for (std::size_t r = 0; r < n; ++r)
      {
        auto const expected = ring.config.expected_q(ring.config.nodelist[c],
                                                     ring.config.nodelist[r]);
        if (r == c)
        {
          CHECK(expected == 0);
        }
        else
        {
          CHECK(expected == walked_q(n, c, r));
        }
      }
    }
  }
}

TEST_CASE("three-member circulation replaces the holder's group at the tail")
{
  Ring  ring{3};
  Token t;
  t = ring.hop(1, t);
  t = ring.hop(2, t);
  t = ring.hop(3, t);
  CHECK(composers(t) == std::vector<NodeId>{1, 2, 3});

  ValidationReport r;
  auto const       g1_before = group_of(t, 1)->nonce;
  t                          = ring.hop(1, t, &r);
  CHECK(r.valid());
  REQUIRE(r.own_q);
  CHECK(*r.own_q == 0);
  CHECK(composers(t) == std::vector<NodeId>{2, 3, 1});
  CHECK(t.groups[0].q == 0);
  CHECK(t.groups[1].q == 1);
  CHECK(t.groups[2].q == 2);
  CHECK(t.groups[2].nonce == g1_before + 1);
}

TEST_CASE("empty queue composes an empty group")
{
  Ring  ring{3};
  auto  t = ring.hop(1, Token{});
  auto &g = t.groups.back();
  CHECK(g.events.empty());
  CHECK(g.base_event_id == 0);
  CHECK(g.post_state_digest == ring.at(1).ledger.state_digest());
  CHECK(g.q == 2);
}

TEST_CASE("queued requests continue from the local maximum")
{
  Ring  ring{3};
  auto &node = ring.at(1);
  for (std::uint64_t i = 1; i <= 7; ++i)
  {
    node.ledger.append(modification(i, "put k" + std::to_string(i) + " 1"));
  }
  for (auto cmd : {"put a 1", "put b 2", "del a"})
  {
    node.pending.push_back(Request{EventKind::Modification, to_bytes(cmd)});
  }
  auto  t = apply_and_advance(node, Token{}, ring.config);
  auto &g = t.groups.back();
  REQUIRE(g.events.size() == 3);
  CHECK(g.base_event_id == 7);
  CHECK(g.events[0].id == 8);
  CHECK(g.events[2].id == 10);
  CHECK(g.last_event_id() == 10);
  CHECK(node.pending.empty());
  CHECK(verify_group(g, ring.view));
}

TEST_CASE("randomized workloads keep every ledger in agreement")
{
  for (std::uint64_t seed = 1; seed <= 8; ++seed)
  {
    Rng   rng{seed};
    Ring  ring{3 + seed % 4};
    Token t;
    for (int round = 0; round < 6; ++round)
    {
      for (auto id : ring.config.nodelist)
      {
        for (auto k = rng.below(3); k > 0; --k)
        {
          ring.at(id).pending.push_back(
              Request{EventKind::Modification,
                      to_bytes("put k" + std::to_string(rng.below(5)) + " " +
                               std::to_string(rng.below(100)))});
        }
        ValidationReport r;
        t = ring.hop(id, t, &r);
        REQUIRE(r.valid());
        if (round > 0)
        {
          REQUIRE(r.own_q);
          CHECK(*r.own_q == 0);
        }
      }
    }
    // one more pass so every member applies everything
    for (auto id : ring.config.nodelist)
    {
      t = ring.hop(id, t);
    }
    auto const min_max = std::min_element(ring.nodes.begin(), ring.nodes.end(),
                                          [](auto const &a, auto const &b) {
                                            return a.ledger.max_event_id() <
                                                   b.ledger.max_event_id();
                                          })
                             ->ledger.max_event_id();
    for (auto const &node : ring.nodes)
    {
      CHECK(node.ledger.digest_at(min_max) == ring.nodes[0].ledger.digest_at(min_max));
    }
  }
}

TEST_CASE("q mismatches are reported without rejecting the group")
{
  Ring  ring{4};
  Token t = ring.round(Token{});
  group_of(t, 3)->q += 1;  // q is outside the signature
  ValidationReport r;
  ring.hop(1, t, &r);
  CHECK(r.has(Rule::QRule));
  CHECK(r.rejected_groups.empty());
}

TEST_CASE("own q above zero or below without joiners breaks the q rule")
{
  Ring  ring{3};
  Token t = ring.round(Token{});
  group_of(t, 1)->q = 1;
  CHECK(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::QRule));
  group_of(t, 1)->q = -1;
  CHECK(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::QRule));
  ring.view.joiners = 1;
  CHECK_FALSE(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::QRule));
}

TEST_CASE("altered content fails the signature check")
{
  Ring  ring{3};
  ring.at(2).pending.push_back(Request{EventKind::Modification, to_bytes("put a 1")});
  Token t = ring.hop(1, Token{});
  t       = ring.hop(2, t);
  group_of(t, 2)->events[0].payload = to_bytes("put a 2");
  auto const r = validate_token(ring.at(3), t, ring.config, ring.view);
  CHECK(r.has(Rule::Signature));
  CHECK(r.rejected_groups.size() == 1);

  ring.view.keys.erase(1);
  CHECK(validate_token(ring.at(3), t, ring.config, ring.view).rejected_groups.size() == 2);
}

TEST_CASE("forked history is rejected and produces evidence")
{
  Ring ring{3};
  ring.at(1).pending.push_back(Request{EventKind::Modification, to_bytes("put a 1")});
  Token t = ring.round(Token{});
  t       = ring.round(t);

  // composer 1 re-signs a different e1 under a fresh nonce
  auto &g = *group_of(t, 1);
  auto  scratch = SubnetLedger::launch(function_binary(1));
  scratch.append(modification(1, "put forged 1"));
  g.base_event_id     = 0;
  g.events            = {scratch.event(1)};
  g.post_state_digest = scratch.state_digest();
  g.nonce += 1;
  g.signature = sign_group(key_of(1), g);

  ValidationReport r;
  auto const       out = ring.hop(2, t, &r);
  CHECK(r.has(Rule::Fork));
  REQUIRE(r.evidence.size() == 1);
  CHECK(r.evidence[0].offender == 1);
  CHECK(r.evidence[0].range_begin == 1);
  CHECK(r.evidence[0].range_end == 1);
  CHECK(verify_evidence(r.evidence[0], ring.view));
  CHECK(out.evidence.size() == 1);
  auto const kept = composers(out);
  CHECK(std::find(kept.begin(), kept.end(), 1) == kept.end());
  CHECK(ring.at(2).known_evidence.contains(r.evidence[0].id()));

  // the next member sees the evidence once and adds nothing new
  ValidationReport r3;
  ring.hop(3, out, &r3);
  CHECK(r3.evidence.empty());
  CHECK_FALSE(r3.has(Rule::Evidence));
}

TEST_CASE("wrong post-state digest and gaps are rejected")
{
  Ring  ring{3};
  Token t = ring.round(Token{});

  SUBCASE("digest")
  {
    auto &g             = *group_of(t, 2);
    g.post_state_digest = sha256(std::string_view{"wrong"});
    g.signature         = sign_group(key_of(2), g);
    CHECK(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::Digest));
  }
  SUBCASE("gap")
  {
    auto &g         = *group_of(t, 2);
    g.base_event_id = 5;
    g.events        = {modification(6, "put a 1")};
    g.signature     = sign_group(key_of(2), g);
    CHECK(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::Continuity));
  }
  SUBCASE("shape")
  {
    auto &g     = *group_of(t, 2);
    g.events    = {modification(3, "put a 1")};  // base is 0
    g.signature = sign_group(key_of(2), g);
    CHECK(validate_token(ring.at(1), t, ring.config, ring.view).has(Rule::Shape));
  }
  SUBCASE("stale nonce")
  {
    Token next  = ring.round(t);
    auto &g     = *group_of(next, 3);
    g.nonce     = 1;
    g.post_state_digest = sha256(std::string_view{"other"});
    g.signature = sign_group(key_of(3), g);
    auto const r = validate_token(ring.at(1), next, ring.config, ring.view);
    CHECK(r.has(Rule::Nonce));
    CHECK(r.evidence.size() == 1);  // same nonce, different content
  }
  SUBCASE("foreign ballot key")
  {
    auto &g = *group_of(t, 2);
    auto  strategy = blind::encrypt_strategy(crypto_round(), 2, game::Vote::Top, 1);
    strategy.key_id = 2;
    g.encrypted_votes.push_back(Ballot{Digest{}, strategy});
    g.signature = sign_group(key_of(2), g);
    auto const r = validate_token(ring.at(1), t, ring.config, ring.view);
    CHECK(r.has(Rule::Ballot));
    CHECK(r.rejected_groups.empty());
  }
}

TEST_CASE("conflict detection between two groups of one composer")
{
  Group a;
  a.composer          = 4;
  a.nonce             = 5;
  a.base_event_id     = 3;
  a.post_state_digest = sha256(std::string_view{"x"});
  auto b              = a;
  b.post_state_digest = sha256(std::string_view{"y"});

  auto const key = key_of(4);
  a.signature    = sign_group(key, a);
  b.signature    = sign_group(key, b);

  FakeView view;
  view.keys[4] = key;

  auto ev = find_conflict(a, b);
  REQUIRE(ev);
  CHECK(ev->offender == 4);
  CHECK(verify_evidence(*ev, view));
  CHECK(find_conflict(b, a)->id() == ev->id());

  SlashingEvidence swapped = *ev;
  std::swap(swapped.first, swapped.second);
  CHECK(swapped.id() == ev->id());

  SUBCASE("forged signature does not verify")
  {
    ev->second.signature[0] ^= 1;
    CHECK_FALSE(verify_evidence(*ev, view));
  }
  SUBCASE("wrong offender does not verify")
  {
    ev->offender = 5;
    CHECK_FALSE(verify_evidence(*ev, view));
  }
  SUBCASE("consistent successors are no conflict")
  {
    auto c          = a;
    c.nonce         = 6;
    c.events        = {modification(4, "put a 1")};
    c.post_state_digest = sha256(std::string_view{"z"});
    CHECK_FALSE(find_conflict(a, c));
    CHECK_FALSE(find_conflict(a, a));
  }
  SUBCASE("different events at one id")
  {
    auto c   = a;
    auto d   = a;
    c.nonce  = 6;
    d.nonce  = 7;
    c.events = {modification(4, "put a 1"), modification(5, "put b 1")};
    d.events = {modification(4, "put a 1"), modification(5, "put b 2")};
    auto e   = find_conflict(c, d);
    REQUIRE(e);
    CHECK(e->range_begin == 5);
    CHECK(e->range_end == 5);
  }
}

TEST_CASE("token serialization roundtrip")
{
  Ring ring{3};
  ring.at(1).pending.push_back(Request{EventKind::Modification, to_bytes("put a 1\nput b 2")});
  ring.at(2).pending.push_back(Request{EventKind::FunctionUpgrade, function_binary(2)});
  Token t = ring.round(Token{});
  t.round = 4;
  t.hop   = 17;

  auto fork      = t.groups[0];
  fork.post_state_digest = sha256(std::string_view{"fork"});
  t.evidence.push_back(*find_conflict(t.groups[0], fork));
  t.groups[1].encrypted_votes.push_back(
      Ballot{sha256(std::string_view{"vote"}),
             blind::encrypt_strategy(crypto_round(), 2, game::Vote::Bot, 9)});

  auto const bytes = serialize_token(t);
  auto const back  = deserialize_token(bytes);
  CHECK(serialize_token(back) == bytes);
  CHECK(back.round == 4);
  CHECK(back.hop == 17);
  REQUIRE(back.groups.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
  {
    CHECK(back.groups[i].content_digest() == t.groups[i].content_digest());
    CHECK(back.groups[i].q == t.groups[i].q);
  }
  CHECK(back.evidence.at(0).id() == t.evidence[0].id());

  auto const resent = serialize_token(t, wire::RecordKind::TokenCopyResend);
  CHECK(resent != bytes);
  CHECK(serialize_token(deserialize_token(resent)) == bytes);

  auto const g = serialize_group(t.groups[0]);
  CHECK(deserialize_group(g).content_digest() == t.groups[0].content_digest());

  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  CHECK_THROWS_AS(deserialize_token(truncated), DecodeError);
  CHECK_THROWS_AS(deserialize_token(g), DecodeError);
}

TEST_CASE("copies are recognised only from token handling")
{
  Ring  ring{3};
  Token t = ring.hop(1, Token{});
  t       = ring.hop(2, t);
  CHECK_FALSE(is_copy(ring.at(3), t));
  ring.hop(3, t);
  CHECK(is_copy(ring.at(3), t));
  CHECK_FALSE(is_copy(ring.at(3), Token{}));

  // a broadcast archives the group but is no proof the token passed
  Ring gossip{3};
  gossip.at(1).pending.push_back(Request{EventKind::Modification, to_bytes("put a 1")});
  Token u = gossip.hop(1, Token{});
  CHECK(broadcast_precommit(gossip.at(2), u.groups[0], gossip.view).result ==
        PrecommitResult::Accepted);
  CHECK_FALSE(is_copy(gossip.at(2), u));
}

TEST_CASE("recovery resends tau after n epsilon")
{
  Ring  ring{5};
  auto &node = ring.at(1);
  CHECK_FALSE(recovery_tick(node, 1000, ring.config));

  auto const t = ring.hop(1, Token{});
  arm_timer(node, 100, ring.config);
  REQUIRE(node.deadline);
  CHECK(*node.deadline == 110);
  CHECK_FALSE(recovery_tick(node, 109, ring.config));
  auto resent = recovery_tick(node, 110, ring.config);
  REQUIRE(resent);
  CHECK(serialize_token(*resent) == serialize_token(t));
  CHECK(*node.deadline == 120);

  // a new token clears the deadline
  ring.hop(1, t);
  CHECK_FALSE(node.deadline);

  auto fresh = NodeState::create(9, SubnetLedger::launch(function_binary(1)), key_of(9));
  arm_timer(fresh, 0, ring.config);
  CHECK_FALSE(recovery_tick(fresh, 1000, ring.config));
}

TEST_CASE("skipping a silent member keeps the q rule")
{
  Ring  ring{4};
  Token t = ring.round(Token{});
  for (int round = 0; round < 3; ++round)
  {
    ValidationReport r;
    t = ring.hop(1, t, &r);
    CHECK(r.valid());
    t = ring.hop(2, t, &r);
    CHECK(r.valid());
    t = skip_member(t, 3, ring.config);
    CHECK_FALSE(group_of(t, 3));
    t = ring.hop(4, t, &r);
    CHECK(r.valid());
  }
}

TEST_CASE("groups of departed composers retire when their hops run out")
{
  Ring ring{3};
  ring.view.keys[9] = key_of(9);
  Group g;
  g.composer          = 9;
  g.nonce             = 1;
  g.post_state_digest = ring.at(1).ledger.state_digest();
  g.q                 = 1;
  g.signature         = sign_group(key_of(9), g);
  Token t;
  t.groups.push_back(g);

  ValidationReport r;
  auto const       out = ring.hop(1, t, &r);
  CHECK(r.valid());
  CHECK(composers(out) == std::vector<NodeId>{1});

  t.groups[0].q = 0;
  CHECK(validate_token(ring.at(2), t, ring.config, ring.view).has(Rule::QRule));
}

TEST_CASE("rotation follows keyed scores")
{
  Ring ring{5};
  ring.config.rotation_count = 2;
  auto const seed            = to_bytes("epoch-seed");
  std::vector<NodeId> pool{1, 2, 11, 12, 13, 14, 12};

  RotationReport report;
  auto const     next = rotate_members(ring.config, seed, pool, &report);
  CHECK(next == rotate_members(ring.config, seed, pool));
  CHECK(report.shortfall == 0);
  REQUIRE(report.rotated_out.size() == 2);

  // oracle: sort by score independently
  auto lowest = [&](std::vector<NodeId> ids, std::string_view role) {
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
      return hmac_sha256(seed, [&] {
               wire::ByteWriter w;
               w.str(role);
               w.u32(a);
               return w.take();
             }()) < hmac_sha256(seed, [&] {
               wire::ByteWriter w;
               w.str(role);
               w.u32(b);
               return w.take();
             }());
    });
    return std::vector<NodeId>(ids.begin(), ids.begin() + 2);
  };
  CHECK(report.rotated_out == lowest(ring.config.nodelist, "out"));
  CHECK(report.rotated_in == lowest({11, 12, 13, 14}, "in"));
  for (std::size_t i = 0; i < 2; ++i)
  {
    auto const pos = *ring.config.position_of(report.rotated_out[i]);
    CHECK(next[pos] == report.rotated_in[i]);
  }
  CHECK(next.size() == 5);

  CHECK(rotate_members(ring.config, to_bytes("other"), pool) != next);

  ring.config.rotation_count = 0;
  CHECK(rotate_members(ring.config, seed, pool) == ring.config.nodelist);

  ring.config.rotation_count = 3;
  std::vector<NodeId> small{11, 12};
  rotate_members(ring.config, seed, small, &report);
  CHECK(report.shortfall == 1);
  CHECK(report.rotated_in.size() == 2);
}

TEST_CASE("upgrade injection")
{
  Ring  ring{3};
  auto &node = ring.at(1);
  CHECK(process_upgrade(node, Token{}, ring.view, 7) == UpgradeDecision::None);

  auto const bin      = function_binary(2);
  ring.view.function  = FunctionRecord{2, bin, sha256(bin)};
  CHECK(process_upgrade(node, Token{}, ring.view, 7) == UpgradeDecision::Inject);
  REQUIRE(node.pending.size() == 1);
  CHECK(node.pending[0].kind == EventKind::FunctionUpgrade);
  CHECK(process_upgrade(node, Token{}, ring.view, 7) == UpgradeDecision::None);
  CHECK(node.pending.size() == 1);

  // another member already carries it
  auto t = ring.hop(1, Token{});
  CHECK(node.ledger.function_version() == 2);
  CHECK(process_upgrade(ring.at(2), t, ring.view, 7) == UpgradeDecision::None);
  CHECK(ring.at(2).pending.empty());
  t = ring.hop(2, t);
  CHECK(ring.at(2).ledger.function_version() == 2);
  CHECK(process_upgrade(ring.at(2), t, ring.view, 7) == UpgradeDecision::None);

  ring.view.function->digest = sha256(std::string_view{"tampered"});
  CHECK(process_upgrade(ring.at(3), Token{}, ring.view, 7) == UpgradeDecision::Rejected);
}

TEST_CASE("broadcast precommit applies, defers and reconciles")
{
  Ring  ring{3};
  auto &a = ring.at(1);
  auto &b = ring.at(2);

  a.pending.push_back(Request{EventKind::Modification, to_bytes("put a 1")});
  auto const t1 = apply_and_advance(a, Token{}, ring.config);
  a.pending.push_back(Request{EventKind::Modification, to_bytes("put b 2")});
  auto const t2 = apply_and_advance(a, t1, ring.config);
  auto const g1 = t1.groups.back();
  auto const g2 = t2.groups.back();

  SUBCASE("in order, then confirmed")
  {
    CHECK(broadcast_precommit(b, g1, ring.view).result == PrecommitResult::Accepted);
    CHECK(b.ledger.has_speculative());
    CHECK(b.ledger.max_event_id() == 1);
    reconcile_speculative(b, t1);
    CHECK_FALSE(b.ledger.has_speculative());
    CHECK(b.ledger.committed_max() == 1);
  }
  SUBCASE("out of order drains the deferred group")
  {
    CHECK(broadcast_precommit(b, g2, ring.view).result == PrecommitResult::Deferred);
    CHECK(b.ledger.max_event_id() == 0);
    CHECK(broadcast_precommit(b, g1, ring.view).result == PrecommitResult::Accepted);
    CHECK(b.ledger.max_event_id() == 2);
    CHECK(b.ledger.state_digest() == a.ledger.state_digest());
  }
  SUBCASE("unconfirmed events roll back")
  {
    CHECK(broadcast_precommit(b, g1, ring.view).result == PrecommitResult::Accepted);
    reconcile_speculative(b, Token{});
    CHECK(b.ledger.max_event_id() == 0);
  }
  SUBCASE("bad signature")
  {
    auto g = g1;
    g.signature[3] ^= 0x10;
    CHECK(broadcast_precommit(b, g, ring.view).result == PrecommitResult::Rejected);
    CHECK(b.ledger.max_event_id() == 0);
  }
  SUBCASE("double signing is caught from broadcasts")
  {
    CHECK(broadcast_precommit(b, g1, ring.view).result == PrecommitResult::Accepted);
    auto twin           = g1;
    twin.events[0]      = modification(1, "put a 9");
    auto scratch        = SubnetLedger::launch(function_binary(1));
    scratch.append(twin.events[0]);
    twin.post_state_digest = scratch.state_digest();
    twin.signature      = sign_group(key_of(1), twin);
    auto const out      = broadcast_precommit(b, twin, ring.view);
    REQUIRE(out.evidence);
    CHECK(out.evidence->offender == 1);
    CHECK(verify_evidence(*out.evidence, ring.view));
  }
}

TEST_CASE("subnet configuration validation")
{
  SubnetConfig c;
  c.nodelist = {1, 2};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.nodelist = {1, 2, 2};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.nodelist = {1, 2, 3};
  c.epsilon  = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.epsilon = 1;
  CHECK_NOTHROW(c.validate());
  CHECK(std::string{to_string(Rule::QRule)} == "q_rule");
}
