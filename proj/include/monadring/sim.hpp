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


// Deterministic discrete-event simulator of a subnet: hostnet launch, key
// sharing, token circulation, rotation, fault injection and slashing votes.
//
// Event log, one record per line:
//
//   #MNRLOG v1 seed=<seed> scenario=<16 hex>
//   <time>|<node>|<KIND>[:k=v,...]|<16 hex digest>
//   ...
//   #END lines=<records> digest=<sha256 of the record lines>
//
// Node 0 marks records of the simulator itself. Metrics are a pure function
// of the records, so replaying a log reproduces them exactly.

#include "monadring/hostnet.hpp"
#include "monadring/scenario.hpp"

#include <map>
#include <memory>
#include <set>

namespace monadring::sim {

struct LogRecord
{
  std::uint64_t                                    time{0};
  NodeId                                           node{0};
  std::string                                      kind;
  std::vector<std::pair<std::string, std::string>> fields;
  std::string                                      digest;  // 16 hex characters

  std::string        to_line() const;
  std::string const *field(std::string_view key) const;
  std::uint64_t      number(std::string_view key) const;

  /// Throws DecodeError.
  static LogRecord parse(std::string_view line);
};

struct Metrics
{
  std::uint64_t                        rounds_completed{0};
  std::vector<std::uint64_t>           round_latencies;
  std::uint64_t                        tokens_lost{0};
  std::uint64_t                        tokens_recovered{0};
  std::vector<std::uint64_t>           recovery_latencies;
  std::map<std::string, std::uint64_t> violations;
  std::uint64_t                        evidence{0};
  std::uint64_t                        votes_opened{0};
  std::uint64_t                        votes_passed{0};
  std::uint64_t                        votes_failed{0};
  std::uint64_t                        tally_mismatches{0};
  std::uint64_t                        transcript_failures{0};
  std::uint64_t                        agreement_checkpoints{0};
  std::uint64_t                        disagreements{0};
  std::uint64_t                        own_q_returns{0};
  std::uint64_t                        own_q_nonzero{0};
  std::uint64_t                        copies{0};
  std::uint64_t                        resends{0};
  std::uint64_t                        skips{0};
  std::uint64_t                        rotations{0};
  std::uint64_t                        rotation_shortfall{0};
  std::uint64_t                        reshares{0};
  std::uint64_t                        reshare_failures{0};
  std::uint64_t                        upgrades_injected{0};
  std::uint64_t                        anchors{0};
  std::uint64_t                        slashes{0};
  std::set<NodeId>                     rotated_in;
  std::uint64_t                        final_time{0};

  void observe(LogRecord const &record);

  /// Disagreeing digests, a wrong tally, a failed transcript or reshare, or
  /// a composer finding its own group at q != 0.
  bool invariant_breach() const;

  std::string to_csv() const;
  std::string summary() const;

  bool operator==(Metrics const &) const = default;
};

struct RunResult
{
  Metrics     metrics;
  std::string log;

  int exit_code() const { return metrics.invariant_breach() ? 2 : 0; }
};

class Simulation
{
public:
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(Simulation const &)            = delete;
  Simulation &operator=(Simulation const &) = delete;

  /// Runs to the round target or the duration, whichever comes first.
  RunResult run();

  Scenario const                          &scenario() const;
  hostnet::Hostnet const                  &hostnet() const;
  ring::SubnetConfig const                &config() const;
  ring::NodeState const                   &node(NodeId id) const;
  bool                                     alive(NodeId id) const;
  std::vector<ring::SlashingEvidence> const &evidence() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunResult run(Scenario const &scenario);

/// Recomputes the metrics of a log. Throws DecodeError on a corrupt or
/// truncated log.
Metrics replay(std::string_view log);

}  // namespace monadring::sim
