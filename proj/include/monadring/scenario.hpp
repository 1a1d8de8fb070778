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


// Simulation scenarios. A scenario is a YAML document; unknown keys are
// rejected so that a typo never silently falls back to a default.
//
//   seed: 42
//   rounds: 10            # stop after this many completed rounds, 0 = run to duration
//   duration: 100000      # simulated time limit
//   network:  { delay_min: 1, delay_max: 3, exec_cost: 1, gossip: false }
//   hostnet:
//     subnet_id: 7
//     launch_threshold: 5
//     function: 1
//     upgrades: [ { time: 60, version: 2 } ]
//   subnet:
//     registrations: [1, 2, 3, 4, 5, 6]   # join order; the first launch_threshold launch
//     epsilon: 6
//     epoch_length: 0                     # rounds per epoch, 0 = no rotation
//     rotation_count: 0
//     share_threshold: 3
//     anchor_every: 1
//   voting:   { theta_top: 0.6, theta_bot: 0.4, alpha: 1, beta: 1 }
//   fhe:      { ring_degree: 1024, modulus_bits: 54, plaintext_modulus: 65536, sigma: 3.2 }
//   workload: { events_min: 1, events_max: 3, keys: 8 }
//   faults:   [ { time: 40, node: 3, kind: DropToken } ]

#include "monadring/digest.hpp"
#include "monadring/fhe.hpp"
#include "monadring/voting_game.hpp"

#include <string>

namespace monadring::sim {

enum class FaultKind
{
  Crash,
  Recover,
  DropToken,
  TamperGroup,
  DoubleSign,
  Equivocate,
};

char const              *to_string(FaultKind kind);
std::optional<FaultKind> parse_fault_kind(std::string_view text);

struct Fault
{
  std::uint64_t time{0};
  NodeId        node{0};
  FaultKind     kind{FaultKind::Crash};
};

struct Upgrade
{
  std::uint64_t time{0};
  std::uint32_t version{0};
};

struct NetworkModel
{
  std::uint64_t delay_min{1};
  std::uint64_t delay_max{3};
  std::uint64_t exec_cost{1};
  bool          gossip{false};
};

struct FheSettings
{
  std::size_t   ring_degree{1024};
  unsigned      modulus_bits{54};
  std::uint64_t plaintext_modulus{65536};
  double        sigma{3.2};

  fhe::FheParams params() const;
};

struct Workload
{
  std::size_t events_min{1};
  std::size_t events_max{3};
  std::size_t keys{8};
};

struct Scenario
{
  std::uint64_t seed{1};
  std::uint64_t rounds{10};
  std::uint64_t duration{1'000'000};
  NetworkModel  network;

  std::uint64_t        subnet_id{1};
  std::size_t          launch_threshold{5};
  std::uint32_t        function_version{1};
  std::vector<Upgrade> upgrades;

  std::vector<NodeId> registrations;
  std::uint64_t       epsilon{6};
  std::uint64_t       epoch_length{0};
  std::size_t         rotation_count{0};
  std::size_t         share_threshold{3};
  std::uint64_t       anchor_every{1};

  game::VotingGameParams voting;
  FheSettings            fhe;
  Workload               workload;
  std::vector<Fault>     faults;

  Digest source_digest{};  // of the scenario bytes

  /// Throws ScenarioError on an inconsistent scenario, including
  /// epsilon <= delay_max + exec_cost.
  void validate() const;
};

/// Throws ScenarioError on malformed YAML, unknown keys or failed validation.
Scenario parse_scenario(std::string_view yaml_text);
Scenario load_scenario(std::string const &path);

}  // namespace monadring::sim
