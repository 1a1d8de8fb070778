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


#include "monadring/blind_voting.hpp"
#include "monadring/fhe.hpp"
#include "monadring/shamir.hpp"
#include "monadring/sim.hpp"
#include "monadring/voting_game.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace monadring;

namespace {

py::dict metrics_dict(sim::Metrics const &m)
{
  py::dict d;
  std::istringstream in{m.to_csv()};
  std::string        line;
  std::getline(in, line);  // header
  while (std::getline(in, line))
  {
    auto const comma = line.find(',');
    d[py::str(line.substr(0, comma))] = py::str(line.substr(comma + 1));
  }
  d["invariant_breach"] = m.invariant_breach();
  return d;
}

py::dict blind_vote(std::size_t n, std::size_t t, std::vector<int> const &votes,
                    std::uint64_t seed)
{
  if (votes.size() != n)
  {
    throw InvalidArgument("need one vote per player");
  }
  Rng        rng{seed};
  auto const round = blind::setup_round(n, t, fhe::FheParams::desk_default(), rng);
  std::vector<blind::EncryptedStrategy> ballots;
  std::uint64_t                         expected = 0;
  for (std::size_t i = 0; i < n; ++i)
  {
    auto const v = votes[i] ? game::Vote::Top : game::Vote::Bot;
    expected += votes[i] ? 1 : 0;
    ballots.push_back(blind::encrypt_strategy(round, i, v, 1));
  }
  std::vector<std::uint64_t> weights(n, 1);
  auto const                 tally = blind::homomorphic_tally(ballots, weights);
  std::vector<blind::KeyShareBundle> bundles(round.aggregation.shares.begin(),
                                             round.aggregation.shares.end());
  auto const opening = blind::threshold_decrypt(tally, bundles, t, round.field);

  py::dict d;
  d["tally"]      = opening.plaintext;
  d["expected"]   = expected;
  d["verified"]   = blind::verify(opening.transcript, tally, bundles, t, round.field);
  d["transcript"] = opening.transcript.to_text();
  return d;
}

}  // namespace

PYBIND11_MODULE(_monadring, m)
{
  m.doc() = "Monadring simulation core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  // ---- voting game ----

  py::enum_<game::Vote>(m, "Vote").value("Top", game::Vote::Top).value("Bot", game::Vote::Bot);

  py::class_<game::VotingGameParams>(m, "VotingGameParams")
      .def(py::init([](std::size_t n, double theta_top, double theta_bot, double alpha,
                       double beta) {
             game::VotingGameParams p;
             p.n         = n;
             p.theta_top = theta_top;
             p.theta_bot = theta_bot;
             p.alpha     = alpha;
             p.beta      = beta;
             p.validate();
             return p;
           }),
           py::arg("n"), py::arg("theta_top"), py::arg("theta_bot"), py::arg("alpha") = 1.0,
           py::arg("beta") = 1.0)
      .def_readwrite("n", &game::VotingGameParams::n)
      .def_readwrite("theta_top", &game::VotingGameParams::theta_top)
      .def_readwrite("theta_bot", &game::VotingGameParams::theta_bot)
      .def_readwrite("alpha", &game::VotingGameParams::alpha)
      .def_readwrite("beta", &game::VotingGameParams::beta);

  py::class_<game::EquilibriumSolution>(m, "EquilibriumSolution")
      .def_property_readonly("xi", [](game::EquilibriumSolution const &s) { return s.strategy.xi; })
      .def_readonly("interior_roots", &game::EquilibriumSolution::interior_roots)
      .def_readonly("zero_is_stationary", &game::EquilibriumSolution::zero_is_stationary)
      .def_readonly("one_is_stationary", &game::EquilibriumSolution::one_is_stationary)
      .def_readonly("closed_form", &game::EquilibriumSolution::closed_form)
      .def_readonly("residual", &game::EquilibriumSolution::residual);

  m.def("expected_payoff", &game::expected_payoff, py::arg("params"), py::arg("xi"),
        py::arg("vote"));
  m.def("posterior_expectation", &game::posterior_expectation, py::arg("params"), py::arg("xi"));
  m.def("posterior_grad_xi", &game::posterior_grad_xi, py::arg("params"), py::arg("xi"));
  m.def("solve_equilibrium_xi", &game::solve_equilibrium_xi, py::arg("params"));

  // ---- secret sharing ----

  m.attr("MERSENNE61") = shamir::Field::kMersenne61;
  m.def(
      "shamir_share",
      [](std::uint64_t secret, std::size_t n, std::size_t t, std::uint64_t seed) {
        Rng  rng{seed};
        auto shares = shamir::share(secret, shamir::SharingPolicy{n, t}, shamir::Field{}, rng);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
        for (auto const &s : shares)
        {
          out.emplace_back(s.x, s.y);
        }
        return out;
      },
      py::arg("secret"), py::arg("n"), py::arg("t"), py::arg("seed") = 1);
  m.def(
      "shamir_reconstruct",
      [](std::vector<std::pair<std::uint64_t, std::uint64_t>> const &pairs, std::size_t t) {
        std::vector<shamir::Share> shares;
        for (auto [x, y] : pairs)
        {
          shares.push_back({x, y});
        }
        return shamir::reconstruct(shares, t, shamir::Field{});
      },
      py::arg("shares"), py::arg("t"));

  // ---- fhe ----

  m.def(
      "fhe_roundtrip",
      [](std::vector<std::int64_t> const &values, std::uint64_t seed) {
        auto const params = fhe::FheParams::desk_default();
        Rng        rng{seed};
        auto const keys = fhe::generate_keys(params, rng);
        auto       m    = fhe::Plaintext{std::vector<std::int64_t>(params.ring_degree())};
        std::copy(values.begin(), values.end(), m.coeffs.begin());
        auto const ct  = fhe::encrypt(keys.pub, m, params, rng);
        auto const out = fhe::decrypt(keys.secret, ct);
        return std::vector<std::int64_t>(out.coeffs.begin(), out.coeffs.begin() + values.size());
      },
      py::arg("values"), py::arg("seed") = 1,
      "Encrypt then decrypt the leading coefficients under fresh default-parameter keys.");
  m.def(
      "fhe_tally",
      [](std::vector<std::int64_t> const &votes, std::vector<std::int64_t> const &weights,
         std::uint64_t seed) {
        if (votes.size() != weights.size() || votes.empty())
        {
          throw InvalidArgument("votes and weights must be non-empty and the same length");
        }
        auto const params = fhe::FheParams::desk_default();
        auto const n      = params.ring_degree();
        Rng        rng{seed};
        auto const keys = fhe::generate_keys(params, rng);
        std::optional<fhe::Ciphertext> acc;
        for (std::size_t i = 0; i < votes.size(); ++i)
        {
          auto ct = fhe::encrypt(keys.pub, fhe::Plaintext::constant(votes[i], n), params, rng);
          ct      = fhe::hom_mul_plain(ct, fhe::Plaintext::constant(weights[i], n));
          acc     = acc ? fhe::hom_add(*acc, ct) : ct;
        }
        return fhe::decrypt(keys.secret, *acc).coeffs[0];
      },
      py::arg("votes"), py::arg("weights"), py::arg("seed") = 1);

  m.def("blind_vote", &blind_vote, py::arg("n"), py::arg("t"), py::arg("votes"),
        py::arg("seed") = 1);

  // ---- simulation ----

  py::class_<sim::RunResult>(m, "RunResult")
      .def_readonly("log", &sim::RunResult::log)
      .def_property_readonly("metrics",
                             [](sim::RunResult const &r) { return metrics_dict(r.metrics); })
      .def_property_readonly("exit_code", &sim::RunResult::exit_code)
      .def_property_readonly("summary",
                             [](sim::RunResult const &r) { return r.metrics.summary(); });

  m.def(
      "simulate",
      [](std::string const &yaml, std::optional<std::uint64_t> seed) {
        auto s = sim::parse_scenario(yaml);
        if (seed)
        {
          s.seed = *seed;
        }
        py::gil_scoped_release release;
        return sim::run(s);
      },
      py::arg("scenario_yaml"), py::arg("seed") = py::none());
  m.def(
      "simulate_file",
      [](std::string const &path, std::optional<std::uint64_t> seed) {
        auto s = sim::load_scenario(path);
        if (seed)
        {
          s.seed = *seed;
        }
        py::gil_scoped_release release;
        return sim::run(s);
      },
      py::arg("path"), py::arg("seed") = py::none());
  m.def(
      "replay", [](std::string const &log) { return metrics_dict(sim::replay(log)); },
      py::arg("log"));
}
