#------------------------------------------------------------------------------
#
#   Copyright 2026 The Monadring Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#
#------------------------------------------------------------------------------

"""Python bindings for the monadring simulation core."""

from ._monadring import (
    MERSENNE61,
    DecodeError,
    EquilibriumSolution,
    Error,
    InvalidArgument,
    RunResult,
    ScenarioError,
    Vote,
    VotingGameParams,
    blind_vote,
    expected_payoff,
    fhe_roundtrip,
    fhe_tally,
    posterior_expectation,
    posterior_grad_xi,
    replay,
    shamir_reconstruct,
    shamir_share,
    simulate,
    simulate_file,
    solve_equilibrium_xi,
)

__all__ = [
    "MERSENNE61",
    "DecodeError",
    "EquilibriumSolution",
    "Error",
    "InvalidArgument",
    "RunResult",
    "ScenarioError",
    "Vote",
    "VotingGameParams",
    "blind_vote",
    "expected_payoff",
    "fhe_roundtrip",
    "fhe_tally",
    "posterior_expectation",
    "posterior_grad_xi",
    "replay",
    "shamir_reconstruct",
    "shamir_share",
    "simulate",
    "simulate_file",
    "solve_equilibrium_xi",
]
