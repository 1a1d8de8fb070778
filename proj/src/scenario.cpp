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


#include "monadring/scenario.hpp"

#include "monadring/ledger.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace monadring::sim {

namespace {

[[noreturn]] void fail(std::string const &message)
{
  throw ScenarioError("scenario: " + message);
}

void check_keys(YAML::Node const &node, std::string const &where,
                std::initializer_list<std::string_view> allowed)
{
  if (!node.IsMap())
  {
    fail("'" + where + "' must be a mapping");
  }
  for (auto const &kv : node)
  {
    auto const key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
    {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read(YAML::Node const &node, char const *key, T &out, std::string const &where)
{
  if (auto v = node[key])
  {
    try
    {
      out = v.as<T>();
    }
    catch (YAML::Exception const &)
    {
      fail("bad value for '" + where + "." + key + "'");
    }
  }
}

}  // namespace

char const *to_string(FaultKind kind)
{
  switch (kind)
  {
  case FaultKind::Crash:
    return "Crash";
  case FaultKind::Recover:
    return "Recover";
  case FaultKind::DropToken:
    return "DropToken";
  case FaultKind::TamperGroup:
    return "TamperGroup";
  case FaultKind::DoubleSign:
    return "DoubleSign";
  case FaultKind::Equivocate:
    return "Equivocate";
  }
  return "?";
}

std::optional<FaultKind> parse_fault_kind(std::string_view text)
{
  for (auto k : {FaultKind::Crash, FaultKind::Recover, FaultKind::DropToken, FaultKind::TamperGroup,
                 FaultKind::DoubleSign, FaultKind::Equivocate})
  {
    if (text == to_string(k))
    {
      return k;
    }
  }
  return std::nullopt;
}

fhe::FheParams FheSettings::params() const
{
  if (modulus_bits < 2 || modulus_bits > 62)
  {
    fail("fhe.modulus_bits must be in [2, 62]");
  }
  try
  {
    return fhe::FheParams{ring_degree, std::uint64_t{1} << modulus_bits, plaintext_modulus, sigma};
  }
  catch (InvalidArgument const &e)
  {
    fail(std::string{"fhe: "} + e.what());
  }
}

void Scenario::validate() const
{
  if (duration == 0)
  {
    fail("duration must be positive");
  }
  if (network.delay_min > network.delay_max)
  {
    fail("network.delay_min exceeds delay_max");
  }
  if (epsilon <= network.delay_max + network.exec_cost)
  {
    fail("subnet.epsilon must exceed network.delay_max + network.exec_cost");
  }
  if (launch_threshold < 3)
  {
    fail("hostnet.launch_threshold must be at least 3");
  }
  if (registrations.size() < launch_threshold)
  {
    fail("fewer registrations than the launch threshold");
  }
  std::set<NodeId> distinct(registrations.begin(), registrations.end());
  if (distinct.size() != registrations.size())
  {
    fail("duplicate node in subnet.registrations");
  }
  if (share_threshold < 2 || share_threshold > launch_threshold)
  {
    fail("subnet.share_threshold must satisfy 2 <= t <= launch_threshold");
  }
  if (rotation_count > launch_threshold)
  {
    fail("subnet.rotation_count exceeds the ring size");
  }
  if (anchor_every == 0)
  {
    fail("subnet.anchor_every must be positive");
  }
  if (!ring::identify_function(ring::function_binary(function_version)))
  {
    fail("hostnet.function names an unknown version");
  }
  for (auto const &u : upgrades)
  {
    if (!ring::identify_function(ring::function_binary(u.version)))
    {
      fail("upgrade names an unknown version");
    }
  }
  if (workload.events_min > workload.events_max || workload.keys == 0)
  {
    fail("workload needs events_min <= events_max and keys >= 1");
  }
  for (auto const &f : faults)
  {
    if (!distinct.contains(f.node))
    {
      fail("fault names unregistered node " + std::to_string(f.node));
    }
  }
  try
  {
    auto v = voting;
    v.n    = launch_threshold;
    v.validate();
  }
  catch (InvalidArgument const &e)
  {
    fail(std::string{"voting: "} + e.what());
  }
  (void)fhe.params();
}

Scenario parse_scenario(std::string_view yaml_text)
{
  YAML::Node root;
  try
  {
    root = YAML::Load(std::string{yaml_text});
  }
  catch (YAML::Exception const &e)
  {
    fail(std::string{"malformed YAML: "} + e.what());
  }
  if (!root.IsMap())
  {
    fail("top level must be a mapping");
  }
  check_keys(root, "scenario",
             {"seed", "rounds", "duration", "network", "hostnet", "subnet", "voting", "fhe",
              "workload", "faults"});

  Scenario s;
  s.source_digest = sha256(yaml_text);
  read(root, "seed", s.seed, "scenario");
  read(root, "rounds", s.rounds, "scenario");
  read(root, "duration", s.duration, "scenario");

  if (auto n = root["network"])
  {
    check_keys(n, "network", {"delay_min", "delay_max", "exec_cost", "gossip"});
    read(n, "delay_min", s.network.delay_min, "network");
    read(n, "delay_max", s.network.delay_max, "network");
    read(n, "exec_cost", s.network.exec_cost, "network");
    read(n, "gossip", s.network.gossip, "network");
  }

  auto h = root["hostnet"];
  if (!h)
  {
    fail("missing 'hostnet' section");
  }
  check_keys(h, "hostnet", {"subnet_id", "launch_threshold", "function", "upgrades"});
  read(h, "subnet_id", s.subnet_id, "hostnet");
  read(h, "launch_threshold", s.launch_threshold, "hostnet");
  read(h, "function", s.function_version, "hostnet");
  if (auto ups = h["upgrades"])
  {
    if (!ups.IsSequence())
    {
      fail("'hostnet.upgrades' must be a list");
    }
    for (auto const &u : ups)
    {
      check_keys(u, "hostnet.upgrades", {"time", "version"});
      if (!u["time"] || !u["version"])
      {
        fail("an upgrade needs time and version");
      }
      Upgrade up;
      read(u, "time", up.time, "hostnet.upgrades");
      read(u, "version", up.version, "hostnet.upgrades");
      s.upgrades.push_back(up);
    }
  }

  auto sub = root["subnet"];
  if (!sub)
  {
    fail("missing 'subnet' section");
  }
  check_keys(sub, "subnet",
             {"registrations", "epsilon", "epoch_length", "rotation_count", "share_threshold",
              "anchor_every"});
  if (!sub["registrations"] || !sub["registrations"].IsSequence())
  {
    fail("'subnet.registrations' must be a list of node ids");
  }
  read(sub, "registrations", s.registrations, "subnet");
  read(sub, "epsilon", s.epsilon, "subnet");
  read(sub, "epoch_length", s.epoch_length, "subnet");
  read(sub, "rotation_count", s.rotation_count, "subnet");
  read(sub, "share_threshold", s.share_threshold, "subnet");
  read(sub, "anchor_every", s.anchor_every, "subnet");

  s.voting.theta_top = 0.6;
  s.voting.theta_bot = 0.4;
  if (auto v = root["voting"])
  {
    check_keys(v, "voting", {"theta_top", "theta_bot", "alpha", "beta"});
    read(v, "theta_top", s.voting.theta_top, "voting");
    read(v, "theta_bot", s.voting.theta_bot, "voting");
    read(v, "alpha", s.voting.alpha, "voting");
    read(v, "beta", s.voting.beta, "voting");
  }
  if (auto f = root["fhe"])
  {
    check_keys(f, "fhe", {"ring_degree", "modulus_bits", "plaintext_modulus", "sigma"});
    read(f, "ring_degree", s.fhe.ring_degree, "fhe");
    read(f, "modulus_bits", s.fhe.modulus_bits, "fhe");
    read(f, "plaintext_modulus", s.fhe.plaintext_modulus, "fhe");
    read(f, "sigma", s.fhe.sigma, "fhe");
  }
  if (auto w = root["workload"])
  {
    check_keys(w, "workload", {"events_min", "events_max", "keys"});
    read(w, "events_min", s.workload.events_min, "workload");
    read(w, "events_max", s.workload.events_max, "workload");
    read(w, "keys", s.workload.keys, "workload");
  }
  if (auto faults = root["faults"])
  {
    if (!faults.IsSequence())
    {
      fail("'faults' must be a list");
    }
    for (auto const &f : faults)
    {
      check_keys(f, "faults", {"time", "node", "kind"});
      if (!f["time"] || !f["node"] || !f["kind"])
      {
        fail("a fault needs time, node and kind");
      }
      Fault fault;
      read(f, "time", fault.time, "faults");
      read(f, "node", fault.node, "faults");
      auto kind = parse_fault_kind(f["kind"].as<std::string>());
      if (!kind)
      {
        fail("unknown fault kind '" + f["kind"].as<std::string>() + "'");
      }
      fault.kind = *kind;
      s.faults.push_back(fault);
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(std::string const &path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
  {
    fail("cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

}  // namespace monadring::sim
