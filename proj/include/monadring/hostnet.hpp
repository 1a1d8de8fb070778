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


// Hostnet: the parent chain's subnet registry as a replayable transaction
// log. Every accepted transaction is appended to the log and chained into
// the head digest; replaying the log rebuilds an identical state.

#include "monadring/ring_protocol.hpp"

#include <variant>

namespace monadring::hostnet {

using ring::SubnetId;

struct RegisterSubnet
{
  SubnetId    subnet;
  std::size_t threshold;
};

struct Join
{
  SubnetId subnet;
  NodeId   node;
};

struct RegisterFunction
{
  SubnetId subnet;
  Bytes    binary;
};

struct RegisterKey
{
  NodeId node;
  Bytes  key;
};

/// Replaces the member list; positions are kept, departing members return
/// to the pool.
struct Rotate
{
  SubnetId            subnet;
  std::uint64_t       epoch;
  std::vector<NodeId> members;
};

struct Anchor
{
  SubnetId      subnet;
  std::uint64_t max_event_id;
  Digest        state_digest;
};

struct Slash
{
  SubnetId subnet;
  NodeId   node;
  Digest   evidence_id;
};

using Transaction =
    std::variant<RegisterSubnet, Join, RegisterFunction, RegisterKey, Rotate, Anchor, Slash>;

/// One canonical text line per transaction.
std::string to_text(Transaction const &tx);

enum class SubnetStatus
{
  Pending,
  Active,
};

char const *to_string(SubnetStatus status);

struct SubnetRecord
{
  SubnetId                         id{0};
  std::size_t                      threshold{0};
  SubnetStatus                     status{SubnetStatus::Pending};
  std::vector<NodeId>              registrations;  // join order
  std::vector<NodeId>              members;
  std::vector<NodeId>              pool;
  std::vector<ring::FunctionRecord> functions;
  std::uint64_t                    epoch{0};
  std::optional<std::uint64_t>     anchored_max;
  Digest                           anchored_digest{};
  std::vector<NodeId>              slashed;
};

struct TxResult
{
  bool        accepted{false};
  std::string reason;
};

class Hostnet : public ring::HostnetView
{
public:
  Hostnet();

  /// Applies `tx` if it is valid against the current state.
  TxResult submit(Transaction const &tx);

  std::vector<Transaction> const &log() const { return log_; }
  Digest const                   &head() const { return head_; }

  SubnetRecord const *subnet(SubnetId id) const;

  std::optional<Bytes>                node_key(NodeId node) const override;
  std::optional<ring::FunctionRecord> latest_function(SubnetId subnet) const override;
  /// Rotation replaces members in place, so nobody joins a ring mid-round.
  std::size_t mid_round_joiners(SubnetId) const override { return 0; }

  /// Deterministic multi-line summary of the whole state.
  std::string report() const;

  /// Throws InvalidArgument if some logged transaction is rejected.
  static Hostnet replay(std::span<Transaction const> log);

private:
  TxResult apply(RegisterSubnet const &tx);
  TxResult apply(Join const &tx);
  TxResult apply(RegisterFunction const &tx);
  TxResult apply(RegisterKey const &tx);
  TxResult apply(Rotate const &tx);
  TxResult apply(Anchor const &tx);
  TxResult apply(Slash const &tx);

  SubnetRecord *find(SubnetId id);

  std::map<SubnetId, SubnetRecord> subnets_;
  std::map<NodeId, Bytes>          keys_;
  std::vector<Transaction>         log_;
  Digest                           head_;
};

}  // namespace monadring::hostnet
