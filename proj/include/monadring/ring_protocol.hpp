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


// Token-ring subnet protocol. A token carries one signed group per member;
// each holder validates the token against its ledger, applies the other
// members' groups, decrements their hop counters q and replaces its own group
// with a fresh one at the tail.
//
// Hop counters. In a ring of n members a group composed with q = n-1 by the
// member at position c is seen by the member at position r with
//
//   q = n - d,  d = (r - c) mod n, d = 0 read as n,
//
// so a composer always finds its own group back at q = 0.

#include "monadring/blind_voting.hpp"
#include "monadring/ledger.hpp"
#include "monadring/voting_game.hpp"
#include "monadring/wire.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>

namespace monadring::ring {

using SubnetId = std::uint64_t;

struct Ballot
{
  Digest                   vote_id;
  blind::EncryptedStrategy strategy;
};

struct Group
{
  NodeId              composer{0};
  std::uint64_t       nonce{0};
  std::uint64_t       base_event_id{0};  // events continue from here
  std::vector<Event>  events;
  Digest              post_state_digest{};
  std::int64_t        q{0};
  std::vector<Ballot> encrypted_votes;
  Digest              signature{};

  std::uint64_t last_event_id() const { return base_event_id + events.size(); }

  /// Everything the signature covers: all fields except q and the signature.
  Bytes  signing_bytes() const;
  Digest content_digest() const;
};

struct SlashingEvidence
{
  Group         first;
  Group         second;
  NodeId        offender{0};
  std::uint64_t range_begin{0};  // conflicting event ids, inclusive; 0..0 for a bare nonce clash
  std::uint64_t range_end{0};

  /// Independent of the order of the two groups.
  Digest id() const;
};

struct Token
{
  std::vector<Group>            groups;
  std::vector<SlashingEvidence> evidence;
  std::uint64_t                 round{0};
  std::uint64_t                 hop{0};
};

Bytes serialize_group(Group const &group);
Group deserialize_group(std::span<std::uint8_t const> data);
Bytes serialize_token(Token const &token, wire::RecordKind kind = wire::RecordKind::TokenDelivery);
Token deserialize_token(std::span<std::uint8_t const> data);

struct SubnetConfig
{
  SubnetId                id{0};
  std::vector<NodeId>     nodelist;
  std::uint64_t           epsilon{1};
  std::uint64_t           epoch_length{0};  // rounds per rotation, 0 = never
  std::size_t             rotation_count{0};
  std::size_t             threshold{3};        // registrations needed to launch
  std::size_t             share_threshold{2};  // t of the key sharing
  game::VotingGameParams  voting;

  /// Throws InvalidArgument unless n >= 3, epsilon > 0, members distinct.
  void validate() const;

  std::size_t                n() const { return nodelist.size(); }
  std::optional<std::size_t> position_of(NodeId node) const;
  bool                       is_member(NodeId node) const { return position_of(node).has_value(); }

  /// q a member at `receiver` expects on a group of `composer`.
  std::int64_t expected_q(NodeId composer, NodeId receiver) const;
};

struct FunctionRecord
{
  std::uint32_t version{0};
  Bytes         binary;
  Digest        digest{};
};

/// What the protocol reads from the hostnet ledger.
class HostnetView
{
public:
  virtual ~HostnetView() = default;

  virtual std::optional<Bytes>          node_key(NodeId node) const                 = 0;
  virtual std::optional<FunctionRecord> latest_function(SubnetId subnet) const      = 0;
  /// Members admitted into the ring since the current round began.
  virtual std::size_t                   mid_round_joiners(SubnetId subnet) const    = 0;
};

Digest sign_group(std::span<std::uint8_t const> key, Group const &group);
bool   verify_group(Group const &group, HostnetView const &view);

/// Conflict between two groups of one composer: same nonce with different
/// content, or an overlapping event id carrying different content.
std::optional<SlashingEvidence> find_conflict(Group const &a, Group const &b);
bool                            verify_evidence(SlashingEvidence const &ev, HostnetView const &view);

enum class Rule
{
  QRule,
  Signature,
  Continuity,
  Digest,
  Fork,
  Shape,
  Nonce,
  Evidence,
  Ballot,
};

char const *to_string(Rule rule);

struct Violation
{
  Rule        rule;
  std::size_t group_index;
  NodeId      composer;
  std::string detail;
};

struct Request
{
  EventKind kind{EventKind::Modification};
  Bytes     payload;
};

struct NodeState
{
  NodeId                       id{0};
  SubnetLedger                 ledger;
  Bytes                        key;
  std::deque<Request>          pending;
  std::optional<Token>         last_seen;  // tau
  std::optional<std::uint64_t> deadline;
  std::uint64_t                next_nonce{1};

  // every verified group seen, by composer then nonce
  std::map<NodeId, std::map<std::uint64_t, Group>> archive;
  std::map<NodeId, std::uint64_t>                  last_token_nonce;
  std::vector<Group>                               deferred;
  std::set<Digest>                                 known_evidence;

  static NodeState create(NodeId id, SubnetLedger ledger, Bytes key);
};

struct ValidationReport
{
  std::vector<Violation>        violations;
  std::vector<SlashingEvidence> evidence;        // new, not yet in the token
  std::set<std::size_t>         rejected_groups;  // indices into token.groups
  std::optional<std::int64_t>   own_q;

  bool valid() const { return violations.empty(); }
  bool has(Rule rule) const;
};

/// Checks the q rule, signatures, event continuity and post-state digests
/// by replaying on a scratch copy of the node's ledger.
ValidationReport validate_token(NodeState const &node, Token const &token,
                                SubnetConfig const &config, HostnetView const &view);

/// Every group already handled in an earlier token, with identical content.
/// Groups known only from broadcasts do not count.
bool is_copy(NodeState const &node, Token const &token);

/// Keeps precommitted events the token confirms, rolls back otherwise.
void reconcile_speculative(NodeState &node, Token const &token);

/// Drops rejected groups and records the new evidence in the token. The
/// node's next group then starts from the smallest commonly agreed id.
Token handle_conflict(NodeState &node, Token token, ValidationReport const &report);

struct AdvanceOptions
{
  std::vector<Ballot> ballots;
  /// Compose this group with a deliberately wrong payload (fault injection).
  std::function<void(Group &)> tamper;
};

/// Applies every group except the node's own, decrements q of the groups it
/// executes, retires departed composers' groups at q <= 0, drains the pending
/// queue into a signed group with q = n-1 at the tail and records tau.
Token apply_and_advance(NodeState &node, Token token, SubnetConfig const &config,
                        AdvanceOptions const &options = {});

/// The token left this node at `now`.
void arm_timer(NodeState &node, std::uint64_t now, SubnetConfig const &config);

/// Resend of tau once the deadline passes; resets the deadline.
std::optional<Token> recovery_tick(NodeState &node, std::uint64_t now, SubnetConfig const &config);

/// Holder-side adjustment when `skipped` did not acknowledge: its group is
/// dropped and every group is decremented on its behalf.
Token skip_member(Token token, NodeId skipped, SubnetConfig const &config);

struct RotationReport
{
  std::vector<NodeId> rotated_out;
  std::vector<NodeId> rotated_in;
  std::size_t         shortfall{0};
};

/// Keyed-hash selection: members with the lowest HMAC(seed, "out"|id) leave,
/// candidates with the lowest HMAC(seed, "in"|id) take their positions.
std::vector<NodeId> rotate_members(SubnetConfig const &config, std::span<std::uint8_t const> epoch_seed,
                                   std::span<NodeId const> candidate_pool,
                                   RotationReport *report = nullptr);

Digest rotation_score(std::span<std::uint8_t const> epoch_seed, std::string_view role, NodeId node);

enum class UpgradeDecision
{
  None,
  Inject,
  Rejected,
};

/// Injects a FunctionUpgrade request when the hostnet holds a newer version
/// that is neither applied, in the token nor already queued.
UpgradeDecision process_upgrade(NodeState &node, Token const &token, HostnetView const &view,
                                SubnetId subnet);

enum class PrecommitResult
{
  Accepted,
  Deferred,
  Rejected,
};

struct PrecommitOutcome
{
  PrecommitResult                 result;
  std::optional<SlashingEvidence> evidence;
};

/// Speculatively applies a broadcast group whose first event is local max + 1.
PrecommitOutcome broadcast_precommit(NodeState &node, Group const &group, HostnetView const &view);

}  // namespace monadring::ring
