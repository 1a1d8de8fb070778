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

#include <algorithm>

namespace monadring::ring {

namespace {

constexpr std::size_t kArchiveDepth = 64;

void write_signed_fields(wire::ByteWriter &w, Group const &g)
{
  w.u32(g.composer);
  w.u64(g.nonce);
  w.u64(g.base_event_id);
  w.u32(static_cast<std::uint32_t>(g.events.size()));
  for (auto const &e : g.events)
  {
    w.u64(e.id);
    w.u8(static_cast<std::uint8_t>(e.kind));
    w.bytes(e.payload);
  }
  w.raw(g.post_state_digest);
  w.u32(static_cast<std::uint32_t>(g.encrypted_votes.size()));
  for (auto const &b : g.encrypted_votes)
  {
    w.raw(b.vote_id);
    w.u64(b.strategy.player);
    w.u64(b.strategy.key_id);
    w.u64(b.strategy.nonce);
    w.bytes(fhe::serialize(b.strategy.ct));
  }
}

Bytes group_body(Group const &g)
{
  wire::ByteWriter w;
  write_signed_fields(w, g);
  w.i64(g.q);
  w.raw(g.signature);
  return w.take();
}

Digest read_digest(wire::ByteReader &r)
{
  Digest d{};
  r.raw(d);
  return d;
}

Group parse_group_body(std::span<std::uint8_t const> body)
{
  wire::ByteReader r{body};
  Group            g;
  g.composer      = r.u32();
  g.nonce         = r.u64();
  g.base_event_id = r.u64();
  auto const ne   = r.u32();
  for (std::uint32_t i = 0; i < ne; ++i)
  {
    Event e;
    e.id         = r.u64();
    auto const k = r.u8();
    if (k > static_cast<std::uint8_t>(EventKind::MemberChange))
    {
      throw DecodeError("group: unknown event kind " + std::to_string(k));
    }
    e.kind    = static_cast<EventKind>(k);
    e.payload = r.bytes();
    g.events.push_back(std::move(e));
  }
  g.post_state_digest = read_digest(r);
  auto const nb       = r.u32();
  for (std::uint32_t i = 0; i < nb; ++i)
  {
    auto const vote_id = read_digest(r);
    auto const player  = r.u64();
    auto const key_id  = r.u64();
    auto const nonce   = r.u64();
    g.encrypted_votes.push_back(
        Ballot{vote_id, {player, key_id, nonce, fhe::deserialize_ciphertext(r.bytes())}});
  }
  g.q         = r.i64();
  g.signature = read_digest(r);
  if (!r.done())
  {
    throw DecodeError("group: trailing bytes");
  }
  return g;
}

bool shape_ok(Group const &g)
{
  for (std::size_t i = 0; i < g.events.size(); ++i)
  {
    if (g.events[i].id != g.base_event_id + 1 + i)
    {
      return false;
    }
  }
  return true;
}

void archive_group(NodeState &node, Group const &g, bool overwrite = true)
{
  auto &slot = node.archive[g.composer];
  if (overwrite)
  {
    slot.insert_or_assign(g.nonce, g);
  }
  else
  {
    slot.emplace(g.nonce, g);
  }
  while (slot.size() > kArchiveDepth)
  {
    slot.erase(slot.begin());
  }
}

bool archived_identical(NodeState const &node, Group const &g)
{
  auto it = node.archive.find(g.composer);
  if (it == node.archive.end())
  {
    return false;
  }
  auto jt = it->second.find(g.nonce);
  return jt != it->second.end() && jt->second.content_digest() == g.content_digest();
}

std::vector<SlashingEvidence> conflicts_with_archive(NodeState const &node, Group const &g)
{
  std::vector<SlashingEvidence> out;
  auto                          it = node.archive.find(g.composer);
  if (it == node.archive.end())
  {
    return out;
  }
  for (auto const &[nonce, old] : it->second)
  {
    if (auto ev = find_conflict(old, g))
    {
      out.push_back(std::move(*ev));
    }
  }
  return out;
}

void retire_departed(Token &token, SubnetConfig const &config)
{
  std::erase_if(token.groups,
                [&](Group const &g) { return !config.is_member(g.composer) && g.q <= 0; });
}

}  // namespace

// ---- groups and tokens -----------------------------------------------------

Bytes Group::signing_bytes() const
{
  wire::ByteWriter w;
  w.str("monadring/group/1");
  write_signed_fields(w, *this);
  return w.take();
}

Digest Group::content_digest() const
{
  return sha256(signing_bytes());
}

Digest SlashingEvidence::id() const
{
  auto a = first.content_digest();
  auto b = second.content_digest();
  if (b < a)
  {
    std::swap(a, b);
  }
  return DigestBuilder{}.add("evidence").add_u64(offender).add(a).add(b).finish();
}

Bytes serialize_group(Group const &group)
{
  return wire::frame(wire::RecordKind::GroupBroadcast, group_body(group));
}

Group deserialize_group(std::span<std::uint8_t const> data)
{
  auto f = wire::unframe(data);
  if (f.kind != wire::RecordKind::GroupBroadcast)
  {
    throw DecodeError("expected a group record");
  }
  return parse_group_body(f.body);
}

Bytes serialize_token(Token const &token, wire::RecordKind kind)
{
  if (kind != wire::RecordKind::TokenDelivery && kind != wire::RecordKind::TokenCopyResend)
  {
    throw InvalidArgument("token record kind must be a delivery or a resend");
  }
  wire::ByteWriter w;
  w.u64(token.round);
  w.u64(token.hop);
  w.u32(static_cast<std::uint32_t>(token.groups.size()));
  for (auto const &g : token.groups)
  {
    w.bytes(group_body(g));
  }
  w.u32(static_cast<std::uint32_t>(token.evidence.size()));
  for (auto const &ev : token.evidence)
  {
    w.bytes(group_body(ev.first));
    w.bytes(group_body(ev.second));
    w.u32(ev.offender);
    w.u64(ev.range_begin);
    w.u64(ev.range_end);
  }
  return wire::frame(kind, w.data());
}

Token deserialize_token(std::span<std::uint8_t const> data)
{
  auto f = wire::unframe(data);
  if (f.kind != wire::RecordKind::TokenDelivery && f.kind != wire::RecordKind::TokenCopyResend)
  {
    throw DecodeError("expected a token record");
  }
  wire::ByteReader r{f.body};
  Token            t;
  t.round      = r.u64();
  t.hop        = r.u64();
  auto const n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i)
  {
    t.groups.push_back(parse_group_body(r.bytes()));
  }
  auto const ne = r.u32();
  for (std::uint32_t i = 0; i < ne; ++i)
  {
    SlashingEvidence ev;
    ev.first       = parse_group_body(r.bytes());
    ev.second      = parse_group_body(r.bytes());
    ev.offender    = r.u32();
    ev.range_begin = r.u64();
    ev.range_end   = r.u64();
    t.evidence.push_back(std::move(ev));
  }
  if (!r.done())
  {
    throw DecodeError("token: trailing bytes");
  }
  return t;
}

// ---- configuration ---------------------------------------------------------

void SubnetConfig::validate() const
{
  if (nodelist.size() < 3)
  {
    throw InvalidArgument("a subnet needs at least 3 members");
  }
  if (epsilon == 0)
  {
    throw InvalidArgument("epsilon must be positive");
  }
  auto sorted = nodelist;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
  {
    throw InvalidArgument("duplicate member in the node list");
  }
  if (share_threshold < 2 || share_threshold > nodelist.size())
  {
    throw InvalidArgument("share threshold must satisfy 2 <= t <= n");
  }
  if (rotation_count > nodelist.size())
  {
    throw InvalidArgument("cannot rotate more members than the ring holds");
  }
}

std::optional<std::size_t> SubnetConfig::position_of(NodeId node) const
{
  auto it = std::find(nodelist.begin(), nodelist.end(), node);
  if (it == nodelist.end())
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - nodelist.begin());
}

std::int64_t SubnetConfig::expected_q(NodeId composer, NodeId receiver) const
{
  auto const c = position_of(composer);
  auto const r = position_of(receiver);
  if (!c || !r)
  {
    throw InvalidArgument("expected_q needs two members");
  }
  auto const nn = n();
  auto       d  = (*r + nn - *c) % nn;
  if (d == 0)
  {
    d = nn;
  }
  return static_cast<std::int64_t>(nn - d);
}

// ---- signatures and evidence -----------------------------------------------

Digest sign_group(std::span<std::uint8_t const> key, Group const &group)
{
  return hmac_sha256(key, group.signing_bytes());
}

bool verify_group(Group const &group, HostnetView const &view)
{
  auto key = view.node_key(group.composer);
  return key && sign_group(*key, group) == group.signature;
}

std::optional<SlashingEvidence> find_conflict(Group const &a, Group const &b)
{
  if (a.composer != b.composer || a.content_digest() == b.content_digest())
  {
    return std::nullopt;
  }
  SlashingEvidence ev{a, b, a.composer, 0, 0};

  auto const lo = std::max(a.base_event_id, b.base_event_id) + 1;
  auto const hi = std::min(a.last_event_id(), b.last_event_id());
  bool       clash = false;
  for (auto id = lo; id <= hi; ++id)
  {
    if (a.events[id - a.base_event_id - 1] != b.events[id - b.base_event_id - 1])
    {
      if (!clash)
      {
        ev.range_begin = id;
      }
      ev.range_end = id;
      clash        = true;
    }
  }
  if (!clash && a.last_event_id() == b.last_event_id() && a.last_event_id() > lo - 1 &&
      a.post_state_digest != b.post_state_digest)
  {
    ev.range_begin = ev.range_end = a.last_event_id();
    clash                         = true;
  }
  if (clash || a.nonce == b.nonce)
  {
    return ev;
  }
  return std::nullopt;
}

bool verify_evidence(SlashingEvidence const &ev, HostnetView const &view)
{
  if (ev.first.composer != ev.offender || ev.second.composer != ev.offender)
  {
    return false;
  }
  if (!verify_group(ev.first, view) || !verify_group(ev.second, view))
  {
    return false;
  }
  auto again = find_conflict(ev.first, ev.second);
  return again && again->range_begin == ev.range_begin && again->range_end == ev.range_end;
}

// ---- validation ------------------------------------------------------------

char const *to_string(Rule rule)
{
  switch (rule)
  {
  case Rule::QRule:
    return "q_rule";
  case Rule::Signature:
    return "signature";
  case Rule::Continuity:
    return "continuity";
  case Rule::Digest:
    return "digest";
  case Rule::Fork:
    return "fork";
  case Rule::Shape:
    return "shape";
  case Rule::Nonce:
    return "nonce";
  case Rule::Evidence:
    return "evidence";
  case Rule::Ballot:
    return "ballot";
  }
  return "?";
}

bool ValidationReport::has(Rule rule) const
{
  return std::any_of(violations.begin(), violations.end(),
                     [&](Violation const &v) { return v.rule == rule; });
}

NodeState NodeState::create(NodeId id, SubnetLedger ledger, Bytes key)
{
  NodeState s;
  s.id     = id;
  s.ledger = std::move(ledger);
  s.key    = std::move(key);
  return s;
}

ValidationReport validate_token(NodeState const &node, Token const &token,
                                SubnetConfig const &config, HostnetView const &view)
{
  ValidationReport report;
  auto             scratch = node.ledger;
  scratch.rollback_speculative();

  std::set<Digest> evidence_ids = node.known_evidence;
  for (auto const &ev : token.evidence)
  {
    if (!verify_evidence(ev, view))
    {
      report.violations.push_back({Rule::Evidence, token.groups.size(), ev.offender,
                                   "evidence does not verify"});
      continue;
    }
    evidence_ids.insert(ev.id());
  }

  auto violate = [&](Rule rule, std::size_t j, Group const &g, std::string detail, bool reject) {
    report.violations.push_back({rule, j, g.composer, std::move(detail)});
    if (reject)
    {
      report.rejected_groups.insert(j);
    }
  };

  std::set<NodeId> composers;
  for (std::size_t j = 0; j < token.groups.size(); ++j)
  {
    auto const &g = token.groups[j];

    if (g.composer == node.id)
    {
      report.own_q = g.q;
      if (g.q > 0)
      {
        violate(Rule::QRule, j, g, "own group returned with q=" + std::to_string(g.q), false);
      }
      else if (g.q < 0 && static_cast<std::size_t>(-g.q) != view.mid_round_joiners(config.id))
      {
        violate(Rule::QRule, j, g, "own q=" + std::to_string(g.q) + " does not match joiners",
                false);
      }
      continue;
    }

    if (!verify_group(g, view))
    {
      violate(Rule::Signature, j, g, "bad signature", true);
      continue;
    }
    if (!composers.insert(g.composer).second || !shape_ok(g))
    {
      violate(Rule::Shape, j, g, "malformed or duplicate group", true);
      continue;
    }

    for (auto &ev : conflicts_with_archive(node, g))
    {
      auto const id = ev.id();
      if (evidence_ids.insert(id).second)
      {
        report.evidence.push_back(std::move(ev));
      }
    }

    auto const last_nonce = [&]() -> std::uint64_t {
      auto it = node.last_token_nonce.find(g.composer);
      return it == node.last_token_nonce.end() ? 0 : it->second;
    }();
    if (g.nonce <= last_nonce && !archived_identical(node, g))
    {
      violate(Rule::Nonce, j, g,
              "nonce " + std::to_string(g.nonce) + " not above " + std::to_string(last_nonce),
              true);
      continue;
    }

    bool bad = false;
    for (auto const &e : g.events)
    {
      if (e.id <= scratch.max_event_id())
      {
        if (scratch.event(e.id) != e)
        {
          violate(Rule::Fork, j, g, "event " + std::to_string(e.id) + " differs from the ledger",
                  true);
          bad = true;
          break;
        }
      }
      else
      {
        if (e.id != scratch.max_event_id() + 1)
        {
          violate(Rule::Continuity, j, g,
                  "event " + std::to_string(e.id) + " after local max " +
                      std::to_string(scratch.max_event_id()),
                  true);
          bad = true;
          break;
        }
        scratch.append_speculative(e);
      }
    }
    if (!bad && g.last_event_id() > scratch.max_event_id())
    {
      violate(Rule::Continuity, j, g, "group starts beyond the local ledger", true);
      bad = true;
    }
    if (!bad && scratch.digest_at(g.last_event_id()) != g.post_state_digest)
    {
      violate(Rule::Digest, j, g,
              "post-state digest mismatch at " + std::to_string(g.last_event_id()), true);
      bad = true;
    }
    if (bad)
    {
      scratch.rollback_speculative();
      continue;
    }
    scratch.commit_speculative();

    if (config.is_member(g.composer))
    {
      auto const expected = config.expected_q(g.composer, node.id);
      if (g.q != expected)
      {
        violate(Rule::QRule, j, g,
                "q=" + std::to_string(g.q) + " expected " + std::to_string(expected), false);
      }
    }
    else if (g.q < 1)
    {
      violate(Rule::QRule, j, g, "departed composer's group outlived its hops", false);
    }

    for (auto const &b : g.encrypted_votes)
    {
      if (b.strategy.key_id != blind::kAggregationKeyId)
      {
        violate(Rule::Ballot, j, g, "ballot not under the aggregation key", false);
        break;
      }
    }
  }
  return report;
}

bool is_copy(NodeState const &node, Token const &token)
{
  if (token.groups.empty())
  {
    return false;
  }
  return std::all_of(token.groups.begin(), token.groups.end(), [&](Group const &g) {
    auto it = node.last_token_nonce.find(g.composer);
    return it != node.last_token_nonce.end() && g.nonce <= it->second &&
           archived_identical(node, g);
  });
}

void reconcile_speculative(NodeState &node, Token const &token)
{
  if (!node.ledger.has_speculative())
  {
    return;
  }
  std::map<std::uint64_t, Event const *> carried;
  for (auto const &g : token.groups)
  {
    if (g.composer == node.id)
    {
      continue;
    }
    for (auto const &e : g.events)
    {
      carried.emplace(e.id, &e);
    }
  }
  for (auto id = node.ledger.committed_max() + 1; id <= node.ledger.max_event_id(); ++id)
  {
    auto it = carried.find(id);
    if (it == carried.end() || *it->second != node.ledger.event(id))
    {
      node.ledger.rollback_speculative();
      return;
    }
  }
  node.ledger.commit_speculative();
}

Token handle_conflict(NodeState &node, Token token, ValidationReport const &report)
{
  std::vector<Group> kept;
  for (std::size_t j = 0; j < token.groups.size(); ++j)
  {
    if (!report.rejected_groups.contains(j))
    {
      kept.push_back(std::move(token.groups[j]));
    }
  }
  token.groups = std::move(kept);

  std::set<Digest> present;
  for (auto const &ev : token.evidence)
  {
    present.insert(ev.id());
  }
  for (auto const &ev : report.evidence)
  {
    if (present.insert(ev.id()).second)
    {
      token.evidence.push_back(ev);
    }
  }
  for (auto const &ev : token.evidence)
  {
    node.known_evidence.insert(ev.id());
  }
  return token;
}

// ---- advancing -------------------------------------------------------------

Token apply_and_advance(NodeState &node, Token token, SubnetConfig const &config,
                        AdvanceOptions const &options)
{
  node.ledger.rollback_speculative();

  std::vector<Group> kept;
  for (auto &g : token.groups)
  {
    if (g.composer == node.id)
    {
      continue;
    }
    for (auto const &e : g.events)
    {
      if (e.id == node.ledger.max_event_id() + 1)
      {
        node.ledger.append(e);
      }
    }
    archive_group(node, g);
    auto &last = node.last_token_nonce[g.composer];
    last       = std::max(last, g.nonce);
    g.q -= 1;
    kept.push_back(std::move(g));
  }
  token.groups = std::move(kept);
  retire_departed(token, config);

  Group own;
  own.composer      = node.id;
  own.nonce         = node.next_nonce++;
  own.base_event_id = node.ledger.max_event_id();
  if (!options.tamper)
  {
    for (auto &req : node.pending)
    {
      Event e{node.ledger.max_event_id() + 1, req.kind, std::move(req.payload)};
      node.ledger.append(e);
      own.events.push_back(std::move(e));
    }
    node.pending.clear();
  }
  own.post_state_digest = node.ledger.state_digest();
  own.q                 = static_cast<std::int64_t>(config.n()) - 1;
  own.encrypted_votes   = options.ballots;
  if (options.tamper)
  {
    options.tamper(own);
  }
  own.signature = sign_group(node.key, own);
  archive_group(node, own);
  node.last_token_nonce[node.id] = own.nonce;
  token.groups.push_back(std::move(own));

  node.deferred.clear();
  node.last_seen = token;
  node.deadline.reset();
  return token;
}

void arm_timer(NodeState &node, std::uint64_t now, SubnetConfig const &config)
{
  node.deadline = now + config.n() * config.epsilon;
}

std::optional<Token> recovery_tick(NodeState &node, std::uint64_t now, SubnetConfig const &config)
{
  if (!node.deadline || now < *node.deadline || !node.last_seen)
  {
    return std::nullopt;
  }
  arm_timer(node, now, config);
  return node.last_seen;
}

Token skip_member(Token token, NodeId skipped, SubnetConfig const &config)
{
  std::erase_if(token.groups, [&](Group const &g) { return g.composer == skipped; });
  for (auto &g : token.groups)
  {
    g.q -= 1;
  }
  retire_departed(token, config);
  return token;
}

// ---- rotation --------------------------------------------------------------

Digest rotation_score(std::span<std::uint8_t const> epoch_seed, std::string_view role, NodeId node)
{
  wire::ByteWriter w;
  w.str(role);
  w.u32(node);
  return hmac_sha256(epoch_seed, w.data());
}

std::vector<NodeId> rotate_members(SubnetConfig const &config, std::span<std::uint8_t const> epoch_seed,
                                   std::span<NodeId const> candidate_pool, RotationReport *report)
{
  auto by_score = [&](std::vector<NodeId> ids, std::string_view role) {
    std::vector<std::pair<Digest, NodeId>> scored;
    for (auto id : ids)
    {
      scored.emplace_back(rotation_score(epoch_seed, role, id), id);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<NodeId> out;
    for (auto const &[s, id] : scored)
    {
      out.push_back(id);
    }
    return out;
  };

  std::vector<NodeId> candidates;
  for (auto id : candidate_pool)
  {
    if (!config.is_member(id) &&
        std::find(candidates.begin(), candidates.end(), id) == candidates.end())
    {
      candidates.push_back(id);
    }
  }
  auto const leaving  = by_score(config.nodelist, "out");
  auto const entering = by_score(candidates, "in");
  auto const k        = std::min(config.rotation_count, entering.size());

  RotationReport r;
  r.shortfall = config.rotation_count - k;
  auto next   = config.nodelist;
  for (std::size_t i = 0; i < k; ++i)
  {
    next[*config.position_of(leaving[i])] = entering[i];
    r.rotated_out.push_back(leaving[i]);
    r.rotated_in.push_back(entering[i]);
  }
  if (report)
  {
    *report = std::move(r);
  }
  return next;
}

// ---- upgrades --------------------------------------------------------------

UpgradeDecision process_upgrade(NodeState &node, Token const &token, HostnetView const &view,
                                SubnetId subnet)
{
  auto rec = view.latest_function(subnet);
  if (!rec || rec->version <= node.ledger.function_version())
  {
    return UpgradeDecision::None;
  }
  auto const info = identify_function(rec->binary);
  if (sha256(rec->binary) != rec->digest || !info || info->version != rec->version)
  {
    return UpgradeDecision::Rejected;
  }
  auto carries = [&](Event const &e) {
    if (e.kind != EventKind::FunctionUpgrade)
    {
      return false;
    }
    auto f = identify_function(e.payload);
    return f && f->version >= rec->version;
  };
  for (auto const &g : token.groups)
  {
    if (std::any_of(g.events.begin(), g.events.end(), carries))
    {
      return UpgradeDecision::None;
    }
  }
  for (auto const &req : node.pending)
  {
    if (req.kind == EventKind::FunctionUpgrade)
    {
      return UpgradeDecision::None;
    }
  }
  node.pending.push_back(Request{EventKind::FunctionUpgrade, rec->binary});
  return UpgradeDecision::Inject;
}

// ---- precommit -------------------------------------------------------------

namespace {

PrecommitResult try_precommit(NodeState &node, Group const &g)
{
  auto &ledger = node.ledger;
  if (!shape_ok(g))
  {
    return PrecommitResult::Rejected;
  }
  if (g.events.empty())
  {
    return PrecommitResult::Accepted;
  }
  if (g.events.front().id > ledger.max_event_id() + 1)
  {
    return PrecommitResult::Deferred;
  }
  for (auto const &e : g.events)
  {
    if (e.id <= ledger.max_event_id())
    {
      if (ledger.event(e.id) != e)
      {
        ledger.rollback_speculative();
        return PrecommitResult::Rejected;
      }
      continue;
    }
    ledger.append_speculative(e);
  }
  if (ledger.digest_at(g.last_event_id()) != g.post_state_digest)
  {
    ledger.rollback_speculative();
    return PrecommitResult::Rejected;
  }
  return PrecommitResult::Accepted;
}

}  // namespace

PrecommitOutcome broadcast_precommit(NodeState &node, Group const &group, HostnetView const &view)
{
  PrecommitOutcome out{PrecommitResult::Rejected, std::nullopt};
  if (!verify_group(group, view))
  {
    return out;
  }
  for (auto &ev : conflicts_with_archive(node, group))
  {
    if (!node.known_evidence.contains(ev.id()))
    {
      out.evidence = std::move(ev);
      break;
    }
  }
  archive_group(node, group, false);

  out.result = try_precommit(node, group);
  if (out.result == PrecommitResult::Deferred)
  {
    node.deferred.push_back(group);
    return out;
  }
  if (out.result != PrecommitResult::Accepted)
  {
    return out;
  }
  for (bool progress = true; progress;)
  {
    progress = false;
    for (auto it = node.deferred.begin(); it != node.deferred.end(); ++it)
    {
      if (it->events.front().id == node.ledger.max_event_id() + 1)
      {
        auto g = *it;
        node.deferred.erase(it);
        try_precommit(node, g);
        progress = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace monadring::ring
