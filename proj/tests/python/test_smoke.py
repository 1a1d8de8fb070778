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

import pathlib

import pytest

import monadring

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = """
seed: 3
rounds: 3
network: { delay_min: 1, delay_max: 2, exec_cost: 1 }
hostnet: { subnet_id: 2, launch_threshold: 3, function: 1 }
subnet: { registrations: [1, 2, 3], epsilon: 5, share_threshold: 2 }
workload: { events_min: 0, events_max: 2, keys: 4 }
"""


def test_symmetric_equilibrium():
    params = monadring.VotingGameParams(10, 0.6, 0.6)
    solution = monadring.solve_equilibrium_xi(params)
    assert abs(solution.xi - 0.5) < 1e-3
    assert solution.closed_form == pytest.approx(0.5)
    assert abs(monadring.posterior_grad_xi(params, solution.xi)) < 1e-6


def test_payoff_bounds():
    params = monadring.VotingGameParams(6, 0.5, 0.5, alpha=2.0, beta=1.0)
    assert monadring.expected_payoff(params, 1.0, monadring.Vote.Top) == pytest.approx(1.0)
    assert monadring.expected_payoff(params, 0.0, monadring.Vote.Top) == pytest.approx(-2.0)


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        monadring.VotingGameParams(1, 0.5, 0.5)


def test_shamir_roundtrip():
    shares = monadring.shamir_share(123456789, 5, 3, seed=7)
    assert len(shares) == 5
    assert monadring.shamir_reconstruct(shares[2:], 3) == 123456789
    with pytest.raises(Exception):
        monadring.shamir_reconstruct(shares[:2], 3)


def test_fhe():
    assert monadring.fhe_roundtrip([1, 2, 65535, 0, 42]) == [1, 2, 65535, 0, 42]
    assert monadring.fhe_tally([1, 0, 1, 1], [3, 5, 7, 1]) == 11


def test_blind_vote():
    out = monadring.blind_vote(5, 3, [1, 0, 1, 1, 0], seed=11)
    assert out["tally"] == out["expected"] == 3
    assert out["verified"]


def test_simulate_is_deterministic_and_replays():
    a = monadring.simulate(MINIMAL)
    b = monadring.simulate(MINIMAL)
    assert a.log == b.log
    assert a.exit_code == 0
    assert a.metrics["rounds_completed"] == "3"
    assert monadring.replay(a.log) == a.metrics
    assert monadring.simulate(MINIMAL, seed=4).log != a.log


def test_scenario_errors():
    with pytest.raises(monadring.ScenarioError):
        monadring.simulate(MINIMAL + "colour: blue\n")
    with pytest.raises(monadring.DecodeError):
        monadring.replay("not a log")


def test_tamper_scenario_slashes():
    result = monadring.simulate_file(str(SCENARIOS / "tamper.yaml"))
    assert result.exit_code == 0
    assert result.metrics["evidence"] == "1"
    assert result.metrics["votes_passed"] == "1"
