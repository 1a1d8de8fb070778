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


// Subnet ledger: an index-ordered event log folded through a pluggable
// key-value interpreter.
//
// Canonical state bytes (all integers little-endian, str = u32 length + bytes):
//
//   "MNRS" u8(1)
//   str function_name  u32 function_version
//   u64 applied  u64 rejected
//   u32 member_count  u32 member...
//   u32 entry_count  (str key, str value)...   keys in ascending byte order
//
// state_digest = SHA-256 of those bytes.

#include "monadring/digest.hpp"

#include <map>
#include <optional>

namespace monadring::ring {

enum class EventKind : std::uint8_t
{
  FunctionLoad    = 0,
  Modification    = 1,
  FunctionUpgrade = 2,
  MemberChange    = 3,
};

char const *to_string(EventKind kind);

struct Event
{
  std::uint64_t id{0};
  EventKind     kind{EventKind::Modification};
  Bytes         payload;

  Digest digest() const;

  bool operator==(Event const &) const = default;
};

Event modification(std::uint64_t id, std::string_view command);

struct FunctionInfo
{
  std::string   name;
  std::uint32_t version{0};

  bool operator==(FunctionInfo const &) const = default;
};

/// Recognised interpreters: "monadring-kv/1" (put, del) and "monadring-kv/2"
/// (adds incr). The binary is the interpreter name as bytes.
std::optional<FunctionInfo> identify_function(std::span<std::uint8_t const> binary);
Bytes                       function_binary(std::uint32_t version);

struct KvState
{
  FunctionInfo                       function;
  std::uint64_t                      applied{0};
  std::uint64_t                      rejected{0};
  std::vector<NodeId>                members;
  std::map<std::string, std::string> entries;

  bool operator==(KvState const &) const = default;
};

/// Deterministic transition f(S, e). Never throws; malformed payloads only
/// bump `rejected`.
KvState apply_event(KvState state, Event const &event);

Bytes  canonical_state(KvState const &state);
Digest state_digest(KvState const &state);

class SubnetLedger
{
public:
  /// Ledger holding e_0, the FunctionLoad of `binary`. Throws InvalidArgument
  /// for an unknown interpreter.
  static SubnetLedger launch(std::span<std::uint8_t const> binary);

  std::uint64_t max_event_id() const { return events_.size() - 1; }
  bool          has(std::uint64_t id) const { return id < events_.size(); }
  Event const  &event(std::uint64_t id) const;

  /// Digest after applying events 0..id.
  Digest const &digest_at(std::uint64_t id) const;
  Digest const &state_digest() const { return digests_.back(); }

  KvState const &state() const { return state_; }
  std::uint32_t  function_version() const { return state_.function.version; }

  /// Appends e with id == max+1. Throws InvalidArgument on a gap.
  void append(Event const &event);

  /// Same, but the event can later be undone by rollback_speculative().
  void append_speculative(Event const &event);

  std::uint64_t committed_max() const { return checkpoint_ ? checkpoint_->max : max_event_id(); }
  bool          has_speculative() const { return checkpoint_.has_value(); }
  void          commit_speculative();
  void          rollback_speculative();

private:
  struct Checkpoint
  {
    std::uint64_t max;
    KvState       state;
  };

  std::vector<Event>        events_;
  std::vector<Digest>       digests_;
  KvState                   state_;
  std::optional<Checkpoint> checkpoint_;
};

}  // namespace monadring::ring
