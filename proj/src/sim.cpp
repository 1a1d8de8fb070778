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


#include "monadring/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <queue>
#include <sstream>
#include <variant>

namespace monadring::sim {

// ---- log records -----------------------------------------------------------

std::string LogRecord::to_line() const
{
  std::string out = std::to_string(time) + '|' + std::to_string(node) + '|' + kind;
  for (std::size_t i = 0; i < fields.size(); ++i)
  {
    out += (i == 0 ? ':' : ',') + fields[i].first + '=' + fields[i].second;
  }
  return out + '|' + digest;
}

std::string const *LogRecord::field(std::string_view key) const
{
  for (auto const &[k, v] : fields)
  {
    if (k == key)
    {
      return &v;
    }
  }
  return nullptr;
}

std::uint64_t LogRecord::number(std::string_view key) const
{
  auto const *v = field(key);
  if (!v)
  {
    throw DecodeError("log: " + kind + " record lacks '" + std::string{key} + "'");
  }
  std::uint64_t out = 0;
  auto [p, ec]      = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || p != v->data() + v->size())
  {
    throw DecodeError("log: '" + *v + "' is not a number");
  }
  return out;
}

namespace {

std::uint64_t parse_u64(std::string_view text, std::string_view what)
{
  std::uint64_t out = 0;
  auto [p, ec]      = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
  {
    throw DecodeError("log: bad " + std::string{what} + " '" + std::string{text} + "'");
  }
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
  std::vector<std::string_view> out;
  std::size_t                   start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
  {
    if (i == text.size() || text[i] == sep)
    {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

LogRecord LogRecord::parse(std::string_view line)
{
  auto parts = split(line, '|');
  if (parts.size() != 4)
  {
    throw DecodeError("log: expected 4 fields in '" + std::string{line} + "'");
  }
  LogRecord r;
  r.time   = parse_u64(parts[0], "time");
  r.node   = static_cast<NodeId>(parse_u64(parts[1], "node"));
  r.digest = std::string{parts[3]};
  if (r.digest.size() != 16)
  {
    throw DecodeError("log: bad digest field");
  }
  auto const body  = parts[2];
  auto const colon = body.find(':');
  r.kind           = std::string{body.substr(0, colon)};
  if (r.kind.empty())
  {
    throw DecodeError("log: empty record kind");
  }
  if (colon != std::string_view::npos)
  {
    for (auto kv : split(body.substr(colon + 1), ','))
    {
      auto const eq = kv.find('=');
      if (eq == std::string_view::npos)
      {
        throw DecodeError("log: bad field '" + std::string{kv} + "'");
      }
      r.fields.emplace_back(std::string{kv.substr(0, eq)}, std::string{kv.substr(eq + 1)});
    }
  }
  return r;
}

// ---- metrics ---------------------------------------------------------------

void Metrics::observe(LogRecord const &r)
{
  auto const &k = r.kind;
  if (k == "ROUND_END")
  {
    ++rounds_completed;
    round_latencies.push_back(r.number("latency"));
  }
  else if (k == "DROP" || k == "LOST")
  {
    ++tokens_lost;
  }
  else if (k == "RECOVERED")
  {
    ++tokens_recovered;
    recovery_latencies.push_back(r.number("latency"));
  }
  else if (k == "VIOLATION")
  {
    auto const *rule = r.field("rule");
    if (!rule)
    {
      throw DecodeError("log: VIOLATION without rule");
    }
    ++violations[*rule];
  }
  else if (k == "EVIDENCE")
  {
    ++evidence;
  }
  else if (k == "VOTE_OPEN")
  {
    ++votes_opened;
  }
  else if (k == "VOTE_PASSED")
  {
    ++votes_passed;
  }
  else if (k == "VOTE_FAILED")
  {
    ++votes_failed;
  }
  else if (k == "TALLY")
  {
    if (r.number("plain") != r.number("expected"))
    {
      ++tally_mismatches;
    }
  }
  else if (k == "TRANSCRIPT")
  {
    if (r.number("ok") != 1)
    {
      ++transcript_failures;
    }
  }
  else if (k == "AGREE")
  {
    ++agreement_checkpoints;
  }
  else if (k == "DISAGREE")
  {
    ++agreement_checkpoints;
    ++disagreements;
  }
  else if (k == "OWN_Q")
  {
    ++own_q_returns;
    if (auto const *q = r.field("q"); !q || *q != "0")
    {
      ++own_q_nonzero;
    }
  }
  else if (k == "COPY")
  {
    ++copies;
  }
  else if (k == "RESEND")
  {
    ++resends;
  }
  else if (k == "SKIP")
  {
    ++skips;
  }
  else if (k == "ROTATE")
  {
    ++rotations;
    rotation_shortfall += r.number("shortfall");
    if (auto const *in = r.field("in"); in && *in != "-")
    {
      for (auto id : split(*in, '+'))
      {
        rotated_in.insert(static_cast<NodeId>(parse_u64(id, "node")));
      }
    }
  }
  else if (k == "RESHARE")
  {
    ++reshares;
    if (r.number("ok") != 1)
    {
      ++reshare_failures;
    }
  }
  else if (k == "UPGRADE")
  {
    ++upgrades_injected;
  }
  else if (k == "ANCHOR")
  {
    ++anchors;
  }
  else if (k == "SLASH")
  {
    ++slashes;
  }
  else if (k == "FINISH")
  {
    final_time = r.time;
  }
}

bool Metrics::invariant_breach() const
{
  return disagreements > 0 || tally_mismatches > 0 || transcript_failures > 0 ||
         reshare_failures > 0 || own_q_nonzero > 0;
}

namespace {

std::string fixed(double v)
{
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << v;
  return out.str();
}

double mean(std::vector<std::uint64_t> const &v)
{
  if (v.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (auto x : v)
  {
    s += static_cast<double>(x);
  }
  return s / static_cast<double>(v.size());
}

std::uint64_t max_of(std::vector<std::uint64_t> const &v)
{
  return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

std::string Metrics::to_csv() const
{
  std::ostringstream out;
  out << "metric,value\n";
  out << "rounds_completed," << rounds_completed << '\n';
  out << "round_latency_mean," << fixed(mean(round_latencies)) << '\n';
  out << "round_latency_max," << max_of(round_latencies) << '\n';
  out << "tokens_lost," << tokens_lost << '\n';
  out << "tokens_recovered," << tokens_recovered << '\n';
  out << "recovery_latency_max," << max_of(recovery_latencies) << '\n';
  std::uint64_t total = 0;
  for (auto const &[rule, count] : violations)
  {
    out << "violations." << rule << ',' << count << '\n';
    total += count;
  }
  out << "violations_total," << total << '\n';
  out << "evidence," << evidence << '\n';
  out << "votes_opened," << votes_opened << '\n';
  out << "votes_passed," << votes_passed << '\n';
  out << "votes_failed," << votes_failed << '\n';
  out << "tally_mismatches," << tally_mismatches << '\n';
  out << "transcript_failures," << transcript_failures << '\n';
  out << "agreement_checkpoints," << agreement_checkpoints << '\n';
  out << "disagreements," << disagreements << '\n';
  out << "own_q_returns," << own_q_returns << '\n';
  out << "own_q_nonzero," << own_q_nonzero << '\n';
  out << "copies," << copies << '\n';
  out << "resends," << resends << '\n';
  out << "skips," << skips << '\n';
  out << "rotations," << rotations << '\n';
  out << "rotation_shortfall," << rotation_shortfall << '\n';
  out << "rotated_in_distinct," << rotated_in.size() << '\n';
  out << "reshares," << reshares << '\n';
  out << "reshare_failures," << reshare_failures << '\n';
  out << "upgrades_injected," << upgrades_injected << '\n';
  out << "anchors," << anchors << '\n';
  out << "slashes," << slashes << '\n';
  out << "final_time," << final_time << '\n';
  return out.str();
}

std::string Metrics::summary() const
{
  std::ostringstream out;
  out << "rounds " << rounds_completed << " (mean latency " << fixed(mean(round_latencies))
      << ", max " << max_of(round_latencies) << ")\n";
  out << "tokens lost " << tokens_lost << ", recovered " << tokens_recovered
      << ", worst recovery " << max_of(recovery_latencies) << '\n';
  std::uint64_t total = 0;
  for (auto const &[rule, count] : violations)
  {
    total += count;
  }
  out << "violations " << total;
  for (auto const &[rule, count] : violations)
  {
    out << ' ' << rule << '=' << count;
  }
  out << '\n';
  out << "evidence " << evidence << ", votes opened " << votes_opened << ", passed "
      << votes_passed << ", failed " << votes_failed << '\n';
  out << "agreement checkpoints " << agreement_checkpoints << ", disagreements " << disagreements
      << '\n';
  out << "rotations " << rotations << ", reshares " << reshares << ", upgrades "
      << upgrades_injected << ", anchors " << anchors << '\n';
  out << (invariant_breach() ? "INVARIANT BREACH\n" : "clean\n");
  return out.str();
}

// ---- simulation ------------------------------------------------------------

namespace {

struct Deliver
{
  NodeId from;
  NodeId to;
  Bytes  frame;
};

struct SendFailed
{
  NodeId from;
  NodeId to;
  Bytes  frame;
};

struct TimerFire
{
  NodeId        node;
  std::uint64_t deadline;
};

struct BroadcastArrive
{
  NodeId to;
  Bytes  frame;
};

struct FaultAt
{
  std::size_t index;
};

struct UpgradeAt
{
  std::size_t index;
};

using Payload = std::variant<Deliver, SendFailed, TimerFire, BroadcastArrive, FaultAt, UpgradeAt>;

struct QueuedEvent
{
  std::uint64_t time;
  std::uint64_t seq;
  Payload       payload;

  bool operator>(QueuedEvent const &o) const
  {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

struct SimNode
{
  ring::NodeState                     state;
  bool                                alive{true};
  bool                                drop_next{false};
  bool                                tamper_next{false};
  bool                                double_sign_next{false};
  bool                                equivocate_next{false};
  NodeId                              last_target{0};
  std::uint64_t                       turn{0};
  std::vector<ring::SlashingEvidence> pending_evidence;
  std::set<Digest>                    voted;
};

struct OpenVote
{
  NodeId                 opener;
  std::uint64_t          opened_turn;
  ring::SlashingEvidence evidence;
};

std::string join_ids(std::span<NodeId const> ids, char sep)
{
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
  {
    out += (i ? std::string(1, sep) : std::string{}) + std::to_string(ids[i]);
  }
  return out.empty() ? "-" : out;
}

using Fields = std::vector<std::pair<std::string, std::string>>;

}  // namespace

struct Simulation::Impl
{
  Scenario                 sc;
  hostnet::Hostnet         host;
  ring::SubnetConfig       config;
  std::map<NodeId, SimNode> nodes;
  blind::Round             crypto;
  Rng                      net_rng;

  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue;
  std::uint64_t                                                               seq{0};

  std::vector<std::string> lines;
  Metrics                  metrics;

  std::uint64_t current_round{0};
  std::uint64_t round_start{0};
  bool          stop{false};
  NodeId        last_processor{0};
  std::optional<std::uint64_t> drop_time;
  std::uint64_t ballot_nonce{0};

  std::map<Digest, OpenVote>                       votes;
  std::map<Digest, std::map<NodeId, game::Vote>>   plaintext_votes;
  std::set<NodeId>                                 accused;
  std::vector<ring::SlashingEvidence>              evidence_seen;

  explicit Impl(Scenario s);

  Bytes node_key(NodeId id) const
  {
    auto d = DigestBuilder{}.add_u64(sc.seed).add("node-key").add_u64(id).finish();
    return Bytes(d.begin(), d.end());
  }

  void log(std::uint64_t time, NodeId node, std::string kind, Fields fields = {},
           std::optional<Digest> digest = std::nullopt)
  {
    LogRecord r{time, node, std::move(kind), std::move(fields), {}};
    if (!digest)
    {
      std::string text = r.kind;
      for (auto const &[k, v] : r.fields)
      {
        text += ',' + k + '=' + v;
      }
      digest = sha256(text);
    }
    r.digest = short_hex(*digest);
    metrics.observe(r);
    lines.push_back(r.to_line());
  }

  void push(std::uint64_t time, Payload p)
  {
    queue.push(QueuedEvent{time, seq++, std::move(p)});
  }

  std::uint64_t delay()
  {
    return static_cast<std::uint64_t>(
        net_rng.between(static_cast<std::int64_t>(sc.network.delay_min),
                        static_cast<std::int64_t>(sc.network.delay_max)));
  }

  std::size_t pos(NodeId id) const { return *config.position_of(id); }

  NodeId successor_of_position(std::size_t p) const
  {
    return config.nodelist[(p + 1) % config.n()];
  }

  void send_token(NodeId from, NodeId to, ring::Token const &token, wire::RecordKind kind,
                  std::uint64_t now)
  {
    auto frame = ring::serialize_token(token, kind);
    if (!nodes.at(to).alive)
    {
      push(now + sc.epsilon, SendFailed{from, to, std::move(frame)});
      return;
    }
    push(now + delay(), Deliver{from, to, std::move(frame)});
  }

  void broadcast(NodeId from, ring::Group const &group, std::uint64_t now)
  {
    auto const frame = ring::serialize_group(group);
    for (auto id : config.nodelist)
    {
      if (id != from && nodes.at(id).alive)
      {
        push(now + delay(), BroadcastArrive{id, frame});
      }
    }
  }

  void arm(NodeId id, std::uint64_t now)
  {
    auto &st = nodes.at(id).state;
    ring::arm_timer(st, now, config);
    push(*st.deadline, TimerFire{id, *st.deadline});
  }

  std::vector<NodeId> live_members() const
  {
    std::vector<NodeId> out;
    for (auto id : config.nodelist)
    {
      if (nodes.at(id).alive)
      {
        out.push_back(id);
      }
    }
    return out;
  }

  NodeId best_synced_member(NodeId except) const
  {
    NodeId        best = 0;
    std::uint64_t top  = 0;
    for (auto id : config.nodelist)
    {
      if (id == except || !nodes.at(id).alive)
      {
        continue;
      }
      auto const m = nodes.at(id).state.ledger.committed_max();
      if (best == 0 || m > top)
      {
        best = id;
        top  = m;
      }
    }
    return best;
  }

  ring::SubnetLedger synced_ledger(NodeId from) const
  {
    auto ledger = nodes.at(from).state.ledger;
    ledger.rollback_speculative();
    return ledger;
  }

  void bootstrap();
  void handle(std::uint64_t now, Deliver &ev);
  void handle(std::uint64_t now, SendFailed &ev);
  void handle(std::uint64_t now, TimerFire &ev);
  void handle(std::uint64_t now, BroadcastArrive &ev);
  void handle(std::uint64_t now, FaultAt &ev);
  void handle(std::uint64_t now, UpgradeAt &ev);

  void process_token(NodeId id, ring::Token token, std::uint64_t now);
  void end_round(NodeId id, ring::Token const &token, std::uint64_t now);
  std::vector<NodeId> rotate(NodeId id, ring::Token const &token, std::uint64_t now);
  void close_vote(Digest const &vote_id, OpenVote const &vote, ring::Token const &token,
                  std::uint64_t now);
  void draw_workload(NodeId id);

  RunResult run();
};

Simulation::Impl::Impl(Scenario s)
  : sc{std::move(s)}
  , crypto{[&] {
    auto rng = Rng::derive(sc.seed, "keygen");
    return blind::setup_round(sc.launch_threshold, sc.share_threshold, sc.fhe.params(), rng);
  }()}
  , net_rng{Rng::derive(sc.seed, "network")}
{
  sc.validate();
}

void Simulation::Impl::bootstrap()
{
  auto require = [](hostnet::TxResult const &r, char const *what) {
    if (!r.accepted)
    {
      throw ScenarioError(std::string{"scenario: hostnet rejected "} + what + ": " + r.reason);
    }
  };
  require(host.submit(hostnet::RegisterSubnet{sc.subnet_id, sc.launch_threshold}), "subnet");
  require(host.submit(hostnet::RegisterFunction{sc.subnet_id,
                                                ring::function_binary(sc.function_version)}),
          "function");
  for (auto id : sc.registrations)
  {
    require(host.submit(hostnet::RegisterKey{id, node_key(id)}), "key");
    require(host.submit(hostnet::Join{sc.subnet_id, id}), "join");
  }
  auto const *rec = host.subnet(sc.subnet_id);

  config.id              = sc.subnet_id;
  config.nodelist        = rec->members;
  config.epsilon         = sc.epsilon;
  config.epoch_length    = sc.epoch_length;
  config.rotation_count  = sc.rotation_count;
  config.threshold       = sc.launch_threshold;
  config.share_threshold = sc.share_threshold;
  config.voting          = sc.voting;
  config.voting.n        = config.n();
  config.validate();

  auto const binary = ring::function_binary(sc.function_version);
  for (auto id : sc.registrations)
  {
    SimNode n;
    n.state = ring::NodeState::create(id, ring::SubnetLedger::launch(binary), node_key(id));
    nodes.emplace(id, std::move(n));
  }
  log(0, 0, "LAUNCH",
      {{"subnet", std::to_string(sc.subnet_id)},
       {"members", join_ids(config.nodelist, '+')},
       {"pool", join_ids(rec->pool, '+')}},
      host.head());
  log(0, 0, "KEYGEN",
      {{"n", std::to_string(crypto.n)}, {"t", std::to_string(crypto.t)}},
      sha256(fhe::serialize(crypto.aggregation.pub, crypto.params)));

  for (std::size_t i = 0; i < sc.faults.size(); ++i)
  {
    push(sc.faults[i].time, FaultAt{i});
  }
  for (std::size_t i = 0; i < sc.upgrades.size(); ++i)
  {
    push(sc.upgrades[i].time, UpgradeAt{i});
  }
  auto const first = config.nodelist.front();
  push(0, Deliver{first, first, ring::serialize_token(ring::Token{})});
}

void Simulation::Impl::draw_workload(NodeId id)
{
  auto &x   = nodes.at(id);
  auto  rng = Rng::derive(sc.seed, "workload", (std::uint64_t{id} << 32) | x.turn);
  auto const count = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(sc.workload.events_min),
                  static_cast<std::int64_t>(sc.workload.events_max)));
  auto const kinds = x.state.ledger.function_version() >= 2 ? 3 : 2;
  for (std::size_t i = 0; i < count; ++i)
  {
    auto const key = "k" + std::to_string(rng.below(sc.workload.keys));
    std::string cmd;
    switch (rng.below(kinds))
    {
    case 0:
      cmd = "put " + key + ' ' + std::to_string(rng.below(1000));
      break;
    case 1:
      cmd = "del " + key;
      break;
    default:
      cmd = "incr " + key + ' ' + std::to_string(1 + rng.below(9));
      break;
    }
    x.state.pending.push_back(ring::Request{ring::EventKind::Modification, to_bytes(cmd)});
  }
}

void Simulation::Impl::handle(std::uint64_t now, Deliver &ev)
{
  auto &x = nodes.at(ev.to);
  if (!x.alive)
  {
    log(now, ev.to, "LOST", {{"from", std::to_string(ev.from)}}, sha256(ev.frame));
    if (!drop_time)
    {
      drop_time = now;
    }
    return;
  }
  if (!config.is_member(ev.to))
  {
    log(now, ev.to, "STRAY", {{"from", std::to_string(ev.from)}}, sha256(ev.frame));
    return;
  }
  auto token = ring::deserialize_token(ev.frame);
  if (x.drop_next)
  {
    x.drop_next = false;
    log(now, ev.to, "DROP", {{"round", std::to_string(token.round)}}, sha256(ev.frame));
    if (!drop_time)
    {
      drop_time = now;
    }
    return;
  }
  if (ring::is_copy(x.state, token))
  {
    log(now, ev.to, "COPY", {{"from", std::to_string(ev.from)}}, sha256(ev.frame));
    return;
  }
  log(now, ev.to, "TOKEN",
      {{"round", std::to_string(token.round)},
       {"hop", std::to_string(token.hop)},
       {"groups", std::to_string(token.groups.size())}},
      sha256(ev.frame));
  process_token(ev.to, std::move(token), now);
}

void Simulation::Impl::process_token(NodeId id, ring::Token token, std::uint64_t now)
{
  auto &x  = nodes.at(id);
  auto &st = x.state;
  ++x.turn;
  last_processor = id;

  ring::reconcile_speculative(st, token);
  auto report = ring::validate_token(st, token, config, host);
  for (auto const &v : report.violations)
  {
    log(now, id, "VIOLATION",
        {{"rule", ring::to_string(v.rule)},
         {"composer", std::to_string(v.composer)},
         {"group", std::to_string(v.group_index)}});
  }

  std::set<Digest> present;
  for (auto const &ev : token.evidence)
  {
    present.insert(ev.id());
  }
  for (auto const &ev : report.evidence)
  {
    present.insert(ev.id());
  }
  for (auto &ev : x.pending_evidence)
  {
    if (present.insert(ev.id()).second)
    {
      report.evidence.push_back(std::move(ev));
    }
  }
  x.pending_evidence.clear();

  std::set<Digest> before;
  for (auto const &ev : token.evidence)
  {
    before.insert(ev.id());
  }
  token = ring::handle_conflict(st, std::move(token), report);
  for (auto const &ev : token.evidence)
  {
    auto const vid = ev.id();
    if (before.contains(vid))
    {
      continue;
    }
    evidence_seen.push_back(ev);
    log(now, id, "EVIDENCE",
        {{"offender", std::to_string(ev.offender)},
         {"from", std::to_string(ev.range_begin)},
         {"to", std::to_string(ev.range_end)},
         {"verified", ring::verify_evidence(ev, host) ? "1" : "0"}},
        vid);
    if (accused.insert(ev.offender).second)
    {
      votes.emplace(vid, OpenVote{id, x.turn, ev});
      log(now, id, "VOTE_OPEN", {{"offender", std::to_string(ev.offender)}}, vid);
    }
  }
  if (report.own_q)
  {
    log(now, id, "OWN_Q", {{"q", std::to_string(*report.own_q)}});
  }

  for (auto it = votes.begin(); it != votes.end();)
  {
    if (it->second.opener == id && x.turn > it->second.opened_turn)
    {
      close_vote(it->first, it->second, token, now);
      auto const vid = it->first;
      std::erase_if(token.evidence, [&](ring::SlashingEvidence const &e) { return e.id() == vid; });
      it = votes.erase(it);
    }
    else
    {
      ++it;
    }
  }

  auto const my_pos = pos(id);
  std::vector<NodeId> newcomers;
  if (token.round > current_round)
  {
    end_round(id, token, now);
    if (sc.epoch_length > 0 && token.round % sc.epoch_length == 0 && sc.rotation_count > 0)
    {
      newcomers = rotate(id, token, now);
    }
  }

  switch (ring::process_upgrade(st, token, host, config.id))
  {
  case ring::UpgradeDecision::Inject:
    log(now, id, "UPGRADE",
        {{"version", std::to_string(host.latest_function(config.id)->version)}},
        host.latest_function(config.id)->digest);
    break;
  case ring::UpgradeDecision::Rejected:
    log(now, id, "UPGRADE_REJECTED");
    break;
  case ring::UpgradeDecision::None:
    break;
  }

  ring::AdvanceOptions options;
  for (auto const &ev : token.evidence)
  {
    auto const vid = ev.id();
    if (!x.voted.insert(vid).second)
    {
      continue;
    }
    auto const vote = (ev.offender == id || !ring::verify_evidence(ev, host)) ? game::Vote::Bot
                                                                              : game::Vote::Top;
    plaintext_votes[vid][id] = vote;
    options.ballots.push_back(
        ring::Ballot{vid, blind::encrypt_strategy(crypto, my_pos, vote, ++ballot_nonce)});
    log(now, id, "BALLOT", {}, vid);
  }

  if (x.tamper_next)
  {
    std::optional<ring::Event> victim;
    for (auto it = st.archive[id].rbegin(); it != st.archive[id].rend() && !victim; ++it)
    {
      if (!it->second.events.empty())
      {
        victim = it->second.events.back();
      }
    }
    if (victim)
    {
      x.tamper_next  = false;
      options.tamper = [victim, id](ring::Group &g) {
        auto forged    = *victim;
        forged.payload = to_bytes("put forged " + std::to_string(victim->id));
        g.base_event_id     = victim->id - 1;
        g.events            = {forged};
        g.post_state_digest = DigestBuilder{}.add("forged").add_u64(id).finish();
      };
      log(now, id, "TAMPER", {{"event", std::to_string(victim->id)}});
    }
  }
  if (!options.tamper)
  {
    draw_workload(id);
  }

  token = ring::apply_and_advance(st, std::move(token), config, options);

  for (auto n : newcomers)
  {
    auto &nx        = nodes.at(n);
    nx.state.ledger = synced_ledger(id);
    nx.state.pending.clear();
    nx.state.last_seen.reset();
    nx.state.deadline.reset();
  }

  auto const next = successor_of_position(my_pos);
  if (pos(next) <= my_pos)
  {
    ++token.round;
  }
  ++token.hop;
  st.last_seen  = token;
  x.last_target = next;
  auto const t  = now + sc.network.exec_cost;
  send_token(id, next, token, wire::RecordKind::TokenDelivery, t);
  arm(id, t);

  auto const &own = token.groups.back();
  if (sc.network.gossip)
  {
    broadcast(id, own, t);
  }
  if (x.double_sign_next || x.equivocate_next)
  {
    auto forged = own;
    if (forged.events.empty())
    {
      forged.events.push_back(
          ring::Event{forged.base_event_id + 1, ring::EventKind::Modification, to_bytes("put forged 1")});
    }
    else
    {
      forged.events.front().payload = to_bytes("put forged " + std::to_string(forged.events.front().id));
    }
    if (x.equivocate_next)
    {
      forged.nonce = st.next_nonce++;
    }
    forged.signature = ring::sign_group(st.key, forged);
    log(now, id, x.equivocate_next ? "EQUIVOCATE" : "DOUBLE_SIGN",
        {{"nonce", std::to_string(forged.nonce)}}, forged.content_digest());
    x.double_sign_next = x.equivocate_next = false;
    broadcast(id, forged, t);
  }
}

void Simulation::Impl::end_round(NodeId id, ring::Token const &token, std::uint64_t now)
{
  log(now, id, "ROUND_END",
      {{"round", std::to_string(current_round)}, {"latency", std::to_string(now - round_start)}});
  round_start   = now;
  current_round = token.round;
  if (drop_time)
  {
    log(now, id, "RECOVERED", {{"latency", std::to_string(now - *drop_time)}});
    drop_time.reset();
  }

  auto const          live = live_members();
  std::uint64_t       m    = std::numeric_limits<std::uint64_t>::max();
  for (auto n : live)
  {
    m = std::min(m, nodes.at(n).state.ledger.committed_max());
  }
  auto const reference = nodes.at(live.front()).state.ledger.digest_at(m);
  bool       agree     = true;
  for (auto n : live)
  {
    agree = agree && nodes.at(n).state.ledger.digest_at(m) == reference;
  }
  log(now, id, agree ? "AGREE" : "DISAGREE",
      {{"round", std::to_string(current_round - 1)}, {"event", std::to_string(m)},
       {"members", std::to_string(live.size())}},
      reference);

  if (current_round % sc.anchor_every == 0)
  {
    auto const &ledger = nodes.at(id).state.ledger;
    auto const  max    = ledger.committed_max();
    auto const  digest = ledger.digest_at(max);
    if (host.submit(hostnet::Anchor{config.id, max, digest}).accepted)
    {
      log(now, id, "ANCHOR", {{"event", std::to_string(max)}}, digest);
    }
  }
  if (sc.rounds > 0 && metrics.rounds_completed >= sc.rounds)
  {
    stop = true;
  }
}

std::vector<NodeId> Simulation::Impl::rotate(NodeId id, ring::Token const &token, std::uint64_t now)
{
  auto const epoch = token.round / sc.epoch_length;
  auto const seed  = DigestBuilder{}.add("epoch").add(host.head()).add_u64(epoch).finish();

  std::vector<NodeId> pool;
  for (auto n : host.subnet(config.id)->pool)
  {
    if (nodes.at(n).alive)
    {
      pool.push_back(n);
    }
  }
  ring::RotationReport report;
  auto const           next = ring::rotate_members(config, seed, pool, &report);
  log(now, id, "ROTATE",
      {{"epoch", std::to_string(epoch)},
       {"out", join_ids(report.rotated_out, '+')},
       {"in", join_ids(report.rotated_in, '+')},
       {"shortfall", std::to_string(report.shortfall)}},
      seed);
  if (!host.submit(hostnet::Rotate{config.id, epoch, next}).accepted)
  {
    log(now, id, "ROTATE_REJECTED");
    return {};
  }

  // aggregation key shares follow the ring positions
  std::vector<blind::KeyShareBundle> old_bundles;
  for (std::size_t p = 0; p < config.n() && old_bundles.size() < crypto.t; ++p)
  {
    if (nodes.at(config.nodelist[p]).alive)
    {
      old_bundles.push_back(crypto.aggregation.shares[p]);
    }
  }
  config.nodelist = next;
  if (old_bundles.size() >= crypto.t)
  {
    auto rng   = Rng::derive(sc.seed, "reshare", epoch);
    auto fresh = blind::reshare_bundles(old_bundles, crypto.t, crypto.policy, crypto.field, rng);
    auto const before = blind::reconstruct_key(old_bundles, crypto.t, crypto.field,
                                               crypto.params.ring_degree(),
                                               crypto.params.ciphertext_modulus());
    std::vector<blind::KeyShareBundle> tail(fresh.end() - static_cast<std::ptrdiff_t>(crypto.t),
                                            fresh.end());
    auto const after = blind::reconstruct_key(tail, crypto.t, crypto.field,
                                              crypto.params.ring_degree(),
                                              crypto.params.ciphertext_modulus());
    DigestBuilder shares;
    for (auto const &b : fresh)
    {
      shares.add(b.digest());
    }
    crypto.aggregation.shares = std::move(fresh);
    log(now, id, "RESHARE", {{"epoch", std::to_string(epoch)}, {"ok", before.s == after.s ? "1" : "0"}},
        shares.finish());
  }
  else
  {
    log(now, id, "RESHARE", {{"epoch", std::to_string(epoch)}, {"ok", "0"}});
  }

  std::string members = "members ";
  for (std::size_t i = 0; i < next.size(); ++i)
  {
    members += (i ? "," : "") + std::to_string(next[i]);
  }
  nodes.at(id).state.pending.push_front(
      ring::Request{ring::EventKind::MemberChange, to_bytes(members)});

  for (auto n : report.rotated_out)
  {
    auto &nx = nodes.at(n);
    nx.state.last_seen.reset();
    nx.state.deadline.reset();
  }
  return report.rotated_in;
}

void Simulation::Impl::close_vote(Digest const &vote_id, OpenVote const &vote,
                                  ring::Token const &token, std::uint64_t now)
{
  auto const                          opener = vote.opener;
  std::vector<blind::EncryptedStrategy> ballots;
  std::uint64_t                       expected = 0;
  for (auto const &g : token.groups)
  {
    for (auto const &b : g.encrypted_votes)
    {
      if (b.vote_id != vote_id)
      {
        continue;
      }
      ballots.push_back(b.strategy);
      auto const &plain = plaintext_votes[vote_id];
      if (auto it = plain.find(g.composer); it != plain.end() && it->second == game::Vote::Top)
      {
        ++expected;
      }
    }
  }
  if (ballots.empty())
  {
    log(now, opener, "VOTE_FAILED", {{"ballots", "0"}}, vote_id);
    return;
  }
  std::vector<std::uint64_t>         weights(ballots.size(), 1);
  auto const                         ct = blind::homomorphic_tally(ballots, weights);
  std::vector<blind::KeyShareBundle> bundles;
  for (std::size_t p = 0; p < config.n() && bundles.size() < crypto.t; ++p)
  {
    if (nodes.at(config.nodelist[p]).alive)
    {
      bundles.push_back(crypto.aggregation.shares[p]);
    }
  }
  auto const opening = blind::threshold_decrypt(ct, bundles, crypto.t, crypto.field);
  auto const ok      = blind::verify(opening.transcript, ct, bundles, crypto.t, crypto.field);
  log(now, opener, "TALLY",
      {{"plain", std::to_string(opening.plaintext)},
       {"expected", std::to_string(expected)},
       {"ballots", std::to_string(ballots.size())}},
      opening.transcript.recomputation_digest);
  log(now, opener, "TRANSCRIPT", {{"ok", ok ? "1" : "0"}}, opening.transcript.ciphertext_digest);

  auto const passed = game::Threshold{sc.voting.theta_top}.exceeded_by(
      static_cast<std::int64_t>(opening.plaintext), static_cast<std::int64_t>(config.n()));
  log(now, opener, passed ? "VOTE_PASSED" : "VOTE_FAILED",
      {{"offender", std::to_string(vote.evidence.offender)}}, vote_id);
  if (passed &&
      host.submit(hostnet::Slash{config.id, vote.evidence.offender, vote_id}).accepted)
  {
    log(now, opener, "SLASH", {{"node", std::to_string(vote.evidence.offender)}}, host.head());
  }
}

void Simulation::Impl::handle(std::uint64_t now, SendFailed &ev)
{
  auto &x = nodes.at(ev.from);
  if (!x.alive || !config.is_member(ev.from) || !config.is_member(ev.to))
  {
    return;
  }
  auto token = ring::skip_member(ring::deserialize_token(ev.frame), ev.to, config);
  log(now, ev.from, "SKIP", {{"node", std::to_string(ev.to)}});
  auto const skipped_pos = pos(ev.to);
  auto const next        = successor_of_position(skipped_pos);
  if (pos(next) <= skipped_pos)
  {
    ++token.round;
  }
  x.state.last_seen = token;
  x.last_target     = next;
  send_token(ev.from, next, token, wire::RecordKind::TokenDelivery, now);
  arm(ev.from, now);
}

void Simulation::Impl::handle(std::uint64_t now, TimerFire &ev)
{
  auto &x = nodes.at(ev.node);
  if (!x.alive || !config.is_member(ev.node) || x.state.deadline != ev.deadline)
  {
    return;
  }
  if (auto copy = ring::recovery_tick(x.state, now, config))
  {
    log(now, ev.node, "RESEND", {{"to", std::to_string(x.last_target)}});
    send_token(ev.node, x.last_target, *copy, wire::RecordKind::TokenCopyResend, now);
    push(*x.state.deadline, TimerFire{ev.node, *x.state.deadline});
  }
}

void Simulation::Impl::handle(std::uint64_t now, BroadcastArrive &ev)
{
  auto &x = nodes.at(ev.to);
  if (!x.alive || !config.is_member(ev.to))
  {
    return;
  }
  auto const group   = ring::deserialize_group(ev.frame);
  auto       outcome = ring::broadcast_precommit(x.state, group, host);
  char const *result = outcome.result == ring::PrecommitResult::Accepted   ? "accepted"
                       : outcome.result == ring::PrecommitResult::Deferred ? "deferred"
                                                                           : "rejected";
  log(now, ev.to, "PRECOMMIT",
      {{"composer", std::to_string(group.composer)}, {"result", result}}, sha256(ev.frame));
  if (outcome.evidence && !x.state.known_evidence.contains(outcome.evidence->id()))
  {
    x.pending_evidence.push_back(std::move(*outcome.evidence));
  }
}

void Simulation::Impl::handle(std::uint64_t now, FaultAt &ev)
{
  auto const &f = sc.faults[ev.index];
  auto       &x = nodes.at(f.node);
  log(now, f.node, "FAULT", {{"kind", to_string(f.kind)}});
  switch (f.kind)
  {
  case FaultKind::Crash:
    x.alive = false;
    break;
  case FaultKind::Recover:
    if (!x.alive)
    {
      x.alive = true;
      if (auto src = best_synced_member(f.node); src != 0 && config.is_member(f.node))
      {
        x.state.ledger = synced_ledger(src);
        log(now, f.node, "RECOVER", {{"from", std::to_string(src)}},
            x.state.ledger.state_digest());
      }
      x.state.last_seen.reset();
      x.state.deadline.reset();
      x.state.deferred.clear();
    }
    break;
  case FaultKind::DropToken:
    x.drop_next = true;
    break;
  case FaultKind::TamperGroup:
    x.tamper_next = true;
    break;
  case FaultKind::DoubleSign:
    x.double_sign_next = true;
    break;
  case FaultKind::Equivocate:
    x.equivocate_next = true;
    break;
  }
}

void Simulation::Impl::handle(std::uint64_t now, UpgradeAt &ev)
{
  auto const &u      = sc.upgrades[ev.index];
  auto const  binary = ring::function_binary(u.version);
  auto const  r      = host.submit(hostnet::RegisterFunction{config.id, binary});
  log(now, 0, r.accepted ? "HOSTNET_FUNCTION" : "HOSTNET_FUNCTION_REJECTED",
      {{"version", std::to_string(u.version)}}, sha256(binary));
}

RunResult Simulation::Impl::run()
{
  bootstrap();
  std::uint64_t now = 0;
  while (!queue.empty() && !stop)
  {
    auto ev = queue.top();
    queue.pop();
    if (ev.time > sc.duration)
    {
      break;
    }
    now = ev.time;
    std::visit([&](auto &p) { handle(now, p); }, ev.payload);
  }

  for (auto id : config.nodelist)
  {
    auto const &n = nodes.at(id);
    log(now, id, "FINAL",
        {{"alive", n.alive ? "1" : "0"},
         {"event", std::to_string(n.state.ledger.committed_max())},
         {"version", std::to_string(n.state.ledger.function_version())}},
        n.state.ledger.digest_at(n.state.ledger.committed_max()));
  }
  log(now, 0, "FINISH", {{"rounds", std::to_string(metrics.rounds_completed)}}, host.head());

  std::ostringstream out;
  out << "#MNRLOG v1 seed=" << sc.seed << " scenario=" << short_hex(sc.source_digest) << '\n';
  std::string body;
  for (auto const &l : lines)
  {
    body += l;
    body += '\n';
  }
  out << body;
  out << "#END lines=" << lines.size() << " digest=" << to_hex(sha256(body)) << '\n';
  return RunResult{metrics, out.str()};
}

Simulation::Simulation(Scenario scenario)
  : impl_{std::make_unique<Impl>(std::move(scenario))}
{}

Simulation::~Simulation() = default;

RunResult Simulation::run()
{
  return impl_->run();
}

Scenario const &Simulation::scenario() const
{
  return impl_->sc;
}

hostnet::Hostnet const &Simulation::hostnet() const
{
  return impl_->host;
}

ring::SubnetConfig const &Simulation::config() const
{
  return impl_->config;
}

ring::NodeState const &Simulation::node(NodeId id) const
{
  return impl_->nodes.at(id).state;
}

bool Simulation::alive(NodeId id) const
{
  return impl_->nodes.at(id).alive;
}

std::vector<ring::SlashingEvidence> const &Simulation::evidence() const
{
  return impl_->evidence_seen;
}

RunResult run(Scenario const &scenario)
{
  Simulation s{scenario};
  return s.run();
}

Metrics replay(std::string_view log)
{
  auto lines = split(log, '\n');
  if (!lines.empty() && lines.back().empty())
  {
    lines.pop_back();
  }
  if (lines.size() < 2 || !lines.front().starts_with("#MNRLOG v1 "))
  {
    throw DecodeError("log: missing header");
  }
  auto const trailer = lines.back();
  if (!trailer.starts_with("#END "))
  {
    throw DecodeError("log: truncated, no trailer");
  }
  Metrics     m;
  std::string body;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i)
  {
    body += lines[i];
    body += '\n';
    m.observe(LogRecord::parse(lines[i]));
  }
  auto const expected = "#END lines=" + std::to_string(lines.size() - 2) +
                        " digest=" + to_hex(sha256(body));
  if (trailer != expected)
  {
    throw DecodeError("log: trailer does not match the records");
  }
  return m;
}

}  // namespace monadring::sim
