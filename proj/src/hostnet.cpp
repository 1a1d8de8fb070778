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


#include "monadring/hostnet.hpp"

#include <algorithm>
#include <sstream>

namespace monadring::hostnet {

namespace {

std::string join_ids(std::span<NodeId const> ids)
{
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
  {
    out += (i ? "," : "") + std::to_string(ids[i]);
  }
  return out.empty() ? "-" : out;
}

bool contains(std::vector<NodeId> const &v, NodeId id)
{
  return std::find(v.begin(), v.end(), id) != v.end();
}

TxResult reject(std::string reason)
{
  return TxResult{false, std::move(reason)};
}

template <class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};

}  // namespace

std::string to_text(Transaction const &tx)
{
  return std::visit(
      Overloaded{
          [](RegisterSubnet const &t) {
            return "register_subnet subnet=" + std::to_string(t.subnet) +
                   " threshold=" + std::to_string(t.threshold);
          },
          [](Join const &t) {
            return "join subnet=" + std::to_string(t.subnet) + " node=" + std::to_string(t.node);
          },
          [](RegisterFunction const &t) {
            return "register_function subnet=" + std::to_string(t.subnet) +
                   " digest=" + to_hex(sha256(t.binary));
          },
          [](RegisterKey const &t) {
            return "register_key node=" + std::to_string(t.node) + " key=" + to_hex(sha256(t.key));
          },
          [](Rotate const &t) {
            return "rotate subnet=" + std::to_string(t.subnet) + " epoch=" + std::to_string(t.epoch) +
                   " members=" + join_ids(t.members);
          },
          [](Anchor const &t) {
            return "anchor subnet=" + std::to_string(t.subnet) +
                   " max=" + std::to_string(t.max_event_id) + " digest=" + to_hex(t.state_digest);
          },
          [](Slash const &t) {
            return "slash subnet=" + std::to_string(t.subnet) + " node=" + std::to_string(t.node) +
                   " evidence=" + to_hex(t.evidence_id);
          },
      },
      tx);
}

char const *to_string(SubnetStatus status)
{
  return status == SubnetStatus::Active ? "Active" : "Pending";
}

Hostnet::Hostnet()
  : head_{sha256(std::string_view{"monadring/hostnet/genesis"})}
{}

SubnetRecord *Hostnet::find(SubnetId id)
{
  auto it = subnets_.find(id);
  return it == subnets_.end() ? nullptr : &it->second;
}

SubnetRecord const *Hostnet::subnet(SubnetId id) const
{
  auto it = subnets_.find(id);
  return it == subnets_.end() ? nullptr : &it->second;
}

TxResult Hostnet::submit(Transaction const &tx)
{
  auto result = std::visit([this](auto const &t) { return apply(t); }, tx);
  if (result.accepted)
  {
    log_.push_back(tx);
    head_ = DigestBuilder{}.add(head_).add(to_text(tx)).finish();
  }
  return result;
}

TxResult Hostnet::apply(RegisterSubnet const &tx)
{
  if (subnets_.contains(tx.subnet))
  {
    return reject("subnet already registered");
  }
  if (tx.threshold < 3)
  {
    return reject("launch threshold must be at least 3");
  }
  SubnetRecord r;
  r.id        = tx.subnet;
  r.threshold = tx.threshold;
  subnets_.emplace(tx.subnet, std::move(r));
  return {true, {}};
}

TxResult Hostnet::apply(Join const &tx)
{
  auto *s = find(tx.subnet);
  if (!s)
  {
    return reject("unknown subnet");
  }
  if (contains(s->registrations, tx.node))
  {
    return reject("node already registered with this subnet");
  }
  if (contains(s->slashed, tx.node))
  {
    return reject("node was slashed on this subnet");
  }
  s->registrations.push_back(tx.node);
  if (s->status == SubnetStatus::Active)
  {
    s->pool.push_back(tx.node);
  }
  else if (s->registrations.size() == s->threshold)
  {
    s->status  = SubnetStatus::Active;
    s->members = s->registrations;
  }
  return {true, {}};
}

TxResult Hostnet::apply(RegisterFunction const &tx)
{
  auto *s = find(tx.subnet);
  if (!s)
  {
    return reject("unknown subnet");
  }
  auto info = ring::identify_function(tx.binary);
  if (!info)
  {
    return reject("unrecognised function binary");
  }
  if (!s->functions.empty() && info->version <= s->functions.back().version)
  {
    return reject("function version must increase");
  }
  s->functions.push_back(ring::FunctionRecord{info->version, tx.binary, sha256(tx.binary)});
  return {true, {}};
}

TxResult Hostnet::apply(RegisterKey const &tx)
{
  if (tx.key.empty())
  {
    return reject("empty key");
  }
  if (keys_.contains(tx.node))
  {
    return reject("key already registered");
  }
  keys_.emplace(tx.node, tx.key);
  return {true, {}};
}

TxResult Hostnet::apply(Rotate const &tx)
{
  auto *s = find(tx.subnet);
  if (!s || s->status != SubnetStatus::Active)
  {
    return reject("subnet is not active");
  }
  if (tx.epoch <= s->epoch)
  {
    return reject("rotation epoch must increase");
  }
  if (tx.members.size() != s->members.size())
  {
    return reject("rotation must keep the ring size");
  }
  std::vector<NodeId> leaving;
  std::vector<NodeId> entering;
  for (std::size_t i = 0; i < tx.members.size(); ++i)
  {
    if (tx.members[i] == s->members[i])
    {
      continue;
    }
    if (!contains(s->pool, tx.members[i]) || contains(entering, tx.members[i]))
    {
      return reject("incoming node " + std::to_string(tx.members[i]) + " is not in the pool");
    }
    leaving.push_back(s->members[i]);
    entering.push_back(tx.members[i]);
  }
  std::erase_if(s->pool, [&](NodeId id) { return contains(entering, id); });
  for (auto id : leaving)
  {
    if (!contains(s->slashed, id))
    {
      s->pool.push_back(id);
    }
  }
  s->members = tx.members;
  s->epoch   = tx.epoch;
  return {true, {}};
}

TxResult Hostnet::apply(Anchor const &tx)
{
  auto *s = find(tx.subnet);
  if (!s || s->status != SubnetStatus::Active)
  {
    return reject("subnet is not active");
  }
  if (s->anchored_max && tx.max_event_id <= *s->anchored_max)
  {
    return reject("anchor must advance the event index");
  }
  s->anchored_max    = tx.max_event_id;
  s->anchored_digest = tx.state_digest;
  return {true, {}};
}

TxResult Hostnet::apply(Slash const &tx)
{
  auto *s = find(tx.subnet);
  if (!s)
  {
    return reject("unknown subnet");
  }
  if (!contains(s->registrations, tx.node))
  {
    return reject("node is not registered with this subnet");
  }
  if (contains(s->slashed, tx.node))
  {
    return reject("node already slashed");
  }
  s->slashed.push_back(tx.node);
  std::erase(s->pool, tx.node);
  return {true, {}};
}

std::optional<Bytes> Hostnet::node_key(NodeId node) const
{
  auto it = keys_.find(node);
  if (it == keys_.end())
  {
    return std::nullopt;
  }
  return it->second;
}

std::optional<ring::FunctionRecord> Hostnet::latest_function(SubnetId subnet) const
{
  auto const *s = this->subnet(subnet);
  if (!s || s->functions.empty())
  {
    return std::nullopt;
  }
  return s->functions.back();
}

std::string Hostnet::report() const
{
  std::ostringstream out;
  out << "hostnet txs=" << log_.size() << " head=" << to_hex(head_) << '\n';
  out << "keys " << keys_.size() << '\n';
  for (auto const &[id, s] : subnets_)
  {
    out << "subnet " << id << " status=" << to_string(s.status) << " threshold=" << s.threshold
        << " epoch=" << s.epoch << '\n';
    out << "  registrations " << join_ids(s.registrations) << '\n';
    out << "  members " << join_ids(s.members) << '\n';
    out << "  pool " << join_ids(s.pool) << '\n';
    out << "  slashed " << join_ids(s.slashed) << '\n';
    for (auto const &f : s.functions)
    {
      out << "  function v" << f.version << ' ' << to_hex(f.digest) << '\n';
    }
    if (s.anchored_max)
    {
      out << "  anchor max=" << *s.anchored_max << " digest=" << to_hex(s.anchored_digest) << '\n';
    }
  }
  return out.str();
}

Hostnet Hostnet::replay(std::span<Transaction const> log)
{
  Hostnet h;
  for (std::size_t i = 0; i < log.size(); ++i)
  {
    if (auto r = h.submit(log[i]); !r.accepted)
    {
      throw InvalidArgument("replay: transaction " + std::to_string(i) + " rejected: " + r.reason);
    }
  }
  return h;
}

}  // namespace monadring::hostnet
