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


#include "monadring/ledger.hpp"

#include "monadring/wire.hpp"

#include <charconv>
#include <sstream>

namespace monadring::ring {

namespace {

constexpr std::string_view kFunctionPrefix = "monadring-kv/";

std::vector<std::string_view> split_words(std::string_view line, std::size_t max_parts)
{
  std::vector<std::string_view> out;
  std::size_t                   pos = 0;
  while (pos < line.size() && out.size() + 1 < max_parts)
  {
    while (pos < line.size() && line[pos] == ' ')
    {
      ++pos;
    }
    auto const end = line.find(' ', pos);
    if (end == std::string_view::npos)
    {
      break;
    }
    out.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  if (pos < line.size())
  {
    out.push_back(line.substr(pos));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view text)
{
  T    value{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
  {
    return std::nullopt;
  }
  return value;
}

bool apply_command(KvState &state, std::string_view line)
{
  auto const words = split_words(line, 3);
  if (words.empty())
  {
    return false;
  }
  if (words[0] == "put" && words.size() == 3 && !words[1].empty())
  {
    state.entries[std::string{words[1]}] = std::string{words[2]};
    return true;
  }
  if (words[0] == "del" && words.size() == 2)
  {
    state.entries.erase(std::string{words[1]});
    return true;
  }
  if (words[0] == "incr" && words.size() == 3 && state.function.version >= 2)
  {
    auto const delta = parse_number<std::int64_t>(words[2]);
    if (!delta)
    {
      return false;
    }
    auto          &slot    = state.entries[std::string{words[1]}];
    std::int64_t   current = 0;
    if (!slot.empty())
    {
      auto const parsed = parse_number<std::int64_t>(slot);
      if (!parsed)
      {
        return false;
      }
      current = *parsed;
    }
    slot = std::to_string(current + *delta);
    return true;
  }
  return false;
}

bool apply_modification(KvState &state, std::string_view text)
{
  // all lines or none
  KvState     scratch = state;
  std::size_t pos     = 0;
  bool        any     = false;
  while (pos <= text.size())
  {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    auto const line = text.substr(pos, end - pos);
    if (!line.empty())
    {
      if (!apply_command(scratch, line))
      {
        return false;
      }
      any = true;
    }
    pos = end + 1;
  }
  if (any)
  {
    state = std::move(scratch);
  }
  return any;
}

std::optional<std::vector<NodeId>> parse_members(std::string_view text)
{
  constexpr std::string_view prefix = "members ";
  if (text.substr(0, prefix.size()) != prefix)
  {
    return std::nullopt;
  }
  text.remove_prefix(prefix.size());
  std::vector<NodeId> out;
  std::size_t         pos = 0;
  while (pos < text.size())
  {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    auto const id = parse_number<NodeId>(text.substr(pos, end - pos));
    if (!id)
    {
      return std::nullopt;
    }
    out.push_back(*id);
    pos = end + 1;
  }
  return out;
}

std::string_view as_text(Bytes const &b)
{
  return {reinterpret_cast<char const *>(b.data()), b.size()};
}

}  // namespace

char const *to_string(EventKind kind)
{
  switch (kind)
  {
  case EventKind::FunctionLoad:
    return "FunctionLoad";
  case EventKind::Modification:
    return "Modification";
  case EventKind::FunctionUpgrade:
    return "FunctionUpgrade";
  case EventKind::MemberChange:
    return "MemberChange";
  }
  return "?";
}

Digest Event::digest() const
{
  return DigestBuilder{}
      .add(std::string_view{"monadring/event/1"})
      .add_u64(id)
      .add_u64(static_cast<std::uint64_t>(kind))
      .add(payload)
      .finish();
}

Event modification(std::uint64_t id, std::string_view command)
{
  return Event{id, EventKind::Modification, to_bytes(command)};
}

std::optional<FunctionInfo> identify_function(std::span<std::uint8_t const> binary)
{
  std::string_view const text{reinterpret_cast<char const *>(binary.data()), binary.size()};
  if (text.substr(0, kFunctionPrefix.size()) != kFunctionPrefix)
  {
    return std::nullopt;
  }
  auto const version = parse_number<std::uint32_t>(text.substr(kFunctionPrefix.size()));
  if (!version || *version < 1 || *version > 2)
  {
    return std::nullopt;
  }
  return FunctionInfo{std::string{text}, *version};
}

Bytes function_binary(std::uint32_t version)
{
  return to_bytes(std::string{kFunctionPrefix} + std::to_string(version));
}

KvState apply_event(KvState state, Event const &event)
{
  bool ok = false;
  switch (event.kind)
  {
  case EventKind::FunctionLoad:
    if (auto f = identify_function(event.payload); f && state.function.version == 0)
    {
      state.function = *f;
      ok             = true;
    }
    break;
  case EventKind::FunctionUpgrade:
    if (auto f = identify_function(event.payload); f && f->version > state.function.version)
    {
      state.function = *f;
      ok             = true;
    }
    break;
  case EventKind::MemberChange:
    if (auto m = parse_members(as_text(event.payload)))
    {
      state.members = std::move(*m);
      ok            = true;
    }
    break;
  case EventKind::Modification:
    ok = state.function.version > 0 && apply_modification(state, as_text(event.payload));
    break;
  }
  ++(ok ? state.applied : state.rejected);
  return state;
}

Bytes canonical_state(KvState const &state)
{
  wire::ByteWriter w;
  w.raw(std::span<std::uint8_t const>{reinterpret_cast<std::uint8_t const *>("MNRS"), 4});
  w.u8(1);
  w.str(state.function.name);
  w.u32(state.function.version);
  w.u64(state.applied);
  w.u64(state.rejected);
  w.u32(static_cast<std::uint32_t>(state.members.size()));
  for (auto m : state.members)
  {
    w.u32(m);
  }
  w.u32(static_cast<std::uint32_t>(state.entries.size()));
  for (auto const &[k, v] : state.entries)
  {
    w.str(k);
    w.str(v);
  }
  return w.take();
}

Digest state_digest(KvState const &state)
{
  return sha256(canonical_state(state));
}

// ---- ledger ----------------------------------------------------------------

SubnetLedger SubnetLedger::launch(std::span<std::uint8_t const> binary)
{
  if (!identify_function(binary))
  {
    throw InvalidArgument("unknown transition function");
  }
  SubnetLedger ledger;
  Event        e0{0, EventKind::FunctionLoad, Bytes(binary.begin(), binary.end())};
  ledger.state_ = apply_event(KvState{}, e0);
  ledger.events_.push_back(std::move(e0));
  ledger.digests_.push_back(ring::state_digest(ledger.state_));
  return ledger;
}

Event const &SubnetLedger::event(std::uint64_t id) const
{
  if (!has(id))
  {
    throw InvalidArgument("no event " + std::to_string(id));
  }
  return events_[id];
}

Digest const &SubnetLedger::digest_at(std::uint64_t id) const
{
  if (!has(id))
  {
    throw InvalidArgument("no event " + std::to_string(id));
  }
  return digests_[id];
}

void SubnetLedger::append(Event const &event)
{
  if (checkpoint_)
  {
    throw Error("commit or roll back speculative events first");
  }
  if (event.id != max_event_id() + 1)
  {
    throw InvalidArgument("event " + std::to_string(event.id) + " does not follow " +
                          std::to_string(max_event_id()));
  }
  state_ = apply_event(std::move(state_), event);
  events_.push_back(event);
  digests_.push_back(ring::state_digest(state_));
}

void SubnetLedger::append_speculative(Event const &event)
{
  if (event.id != max_event_id() + 1)
  {
    throw InvalidArgument("event " + std::to_string(event.id) + " does not follow " +
                          std::to_string(max_event_id()));
  }
  if (!checkpoint_)
  {
    checkpoint_ = Checkpoint{max_event_id(), state_};
  }
  state_ = apply_event(std::move(state_), event);
  events_.push_back(event);
  digests_.push_back(ring::state_digest(state_));
}

void SubnetLedger::commit_speculative()
{
  checkpoint_.reset();
}

void SubnetLedger::rollback_speculative()
{
  if (!checkpoint_)
  {
    return;
  }
  events_.resize(checkpoint_->max + 1);
  digests_.resize(checkpoint_->max + 1);
  state_ = std::move(checkpoint_->state);
  checkpoint_.reset();
}

}  // namespace monadring::ring
