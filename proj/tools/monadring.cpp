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


// monadring command-line tool.
//
//   monadring simulate --scenario <file> [--seed N] [--metrics-out <file>] [--log-out <file>]
//   monadring equilibrium --n N --theta-top T --theta-bot B --alpha A --beta B [--optimize]
//   monadring crypto-demo fhe|shamir|blind-vote [...]
//
// Exit codes: 0 clean, 2 invariant breach, 3 scenario or input error.

#include "monadring/blind_voting.hpp"
#include "monadring/sim.hpp"
#include "monadring/voting_game.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace monadring;

constexpr int kClean           = 0;
constexpr int kInvariantBreach = 2;
constexpr int kInputError      = 3;

void write_file(std::string const &path, std::string const &content)
{
  std::ofstream out{path, std::ios::binary};
  if (!out)
  {
    throw ScenarioError("cannot write '" + path + "'");
  }
  out << content;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs
{
  std::string                  scenario;
  std::optional<std::uint64_t> seed;
  std::string                  metrics_out;
  std::string                  log_out;
  bool                         quiet{false};
};

int simulate(SimulateArgs const &args)
{
  auto scenario = sim::load_scenario(args.scenario);
  if (args.seed)
  {
    scenario.seed = *args.seed;
  }
  auto const result = sim::run(scenario);
  if (!args.log_out.empty())
  {
    write_file(args.log_out, result.log);
  }
  else if (!args.quiet)
  {
    std::cout << result.log;
  }
  if (!args.metrics_out.empty())
  {
    write_file(args.metrics_out, result.metrics.to_csv());
  }
  std::cerr << result.metrics.summary();
  return result.exit_code();
}

// ---- equilibrium -----------------------------------------------------------

struct EquilibriumArgs
{
  std::size_t           n{10};
  double                theta_top{0.5};
  double                theta_bot{0.5};
  double                alpha{1.0};
  double                beta{1.0};
  bool                  optimize{false};
  std::optional<double> xi0;
  double                lambda{0.0};
  double                lambda1{0.0};
  double                lambda2{0.0};
  std::size_t           max_iters{10000};
  bool                  freeze_theta{false};
};

int equilibrium(EquilibriumArgs const &args)
{
  game::VotingGameParams p;
  p.n         = args.n;
  p.theta_top = args.theta_top;
  p.theta_bot = args.theta_bot;
  p.alpha     = args.alpha;
  p.beta      = args.beta;
  p.validate();

  std::cout << std::setprecision(12);
  if (!args.optimize)
  {
    auto const sol = game::solve_equilibrium_xi(p);
    std::cout << "xi,closed_form,residual,interior_roots,zero_stationary,one_stationary\n";
    std::cout << sol.strategy.xi << ',' << sol.closed_form << ',' << sol.residual << ','
              << sol.interior_roots.size() << ',' << sol.zero_is_stationary << ','
              << sol.one_is_stationary << '\n';
    return kClean;
  }

  game::MechanismObjective objective;
  objective.lambda  = args.lambda;
  objective.lambda1 = args.lambda1;
  objective.lambda2 = args.lambda2;
  game::OptimizerOptions options;
  options.max_iters    = args.max_iters;
  options.freeze_theta = args.freeze_theta;
  auto const xi0       = args.xi0 ? *args.xi0 : game::solve_equilibrium_xi(p).strategy.xi;
  auto const result =
      game::optimize_mechanism(objective, {args.theta_top, args.theta_bot, xi0}, p, options);
  std::cout << "iter,F,xi,theta_top,theta_bot\n";
  for (auto const &row : result.trace)
  {
    std::cout << row.iter << ',' << row.f << ',' << row.xi << ',' << row.theta_top << ','
              << row.theta_bot << '\n';
  }
  return kClean;
}

// ---- crypto demos ----------------------------------------------------------

struct CryptoArgs
{
  std::string   demo;
  std::size_t   n{3};
  std::size_t   t{2};
  std::string   votes{"1,0,1"};
  std::uint64_t seed{1};
  std::uint64_t secret{123456789};
};

std::vector<game::Vote> parse_votes(std::string const &text)
{
  std::vector<game::Vote> out;
  std::stringstream       in{text};
  std::string             item;
  while (std::getline(in, item, ','))
  {
    if (item == "1")
    {
      out.push_back(game::Vote::Top);
    }
    else if (item == "0")
    {
      out.push_back(game::Vote::Bot);
    }
    else
    {
      throw InvalidArgument("votes must be a comma-separated list of 0 and 1");
    }
  }
  return out;
}

int demo_fhe(CryptoArgs const &args)
{
  auto const params = fhe::FheParams::desk_default();
  Rng        rng{args.seed};
  auto const keys = fhe::generate_keys(params, rng);
  auto const n    = params.ring_degree();

  auto a = fhe::encrypt(keys.pub, fhe::Plaintext::constant(20, n), params, rng);
  auto b = fhe::encrypt(keys.pub, fhe::Plaintext::constant(22, n), params, rng);
  std::cout << "params N=" << n << " q=" << params.ciphertext_modulus()
            << " p=" << params.plaintext_modulus() << " sigma=" << params.gaussian_stddev()
            << '\n';
  std::cout << "decryption bound " << params.decryption_bound() << ", fresh noise bound "
            << params.fresh_noise_bound() << '\n';
  auto const sum = fhe::hom_add(a, b);
  auto const scaled = fhe::hom_mul_plain(sum, fhe::Plaintext::constant(3, n));
  std::cout << "Enc(20) + Enc(22) -> " << fhe::decrypt(keys.secret, sum).coeffs[0]
            << " (budget " << sum.noise_budget << ")\n";
  std::cout << "3 * (Enc(20) + Enc(22)) -> " << fhe::decrypt(keys.secret, scaled).coeffs[0]
            << " (budget " << scaled.noise_budget << ")\n";
  auto const ok = fhe::decrypt(keys.secret, scaled).coeffs[0] == 126;
  return ok ? kClean : kInvariantBreach;
}

int demo_shamir(CryptoArgs const &args)
{
  shamir::Field         field;
  shamir::SharingPolicy policy{args.n, args.t};
  Rng                   rng{args.seed};
  auto const            secret = args.secret % field.prime();
  auto const            shares = shamir::share(secret, policy, field, rng);
  std::cout << "secret " << secret << " shared " << args.t << "-of-" << args.n << " over P=" << field.prime()
            << '\n';
  for (auto const &s : shares)
  {
    std::cout << "  share x=" << s.x << " y=" << s.y << '\n';
  }

  std::size_t subsets = 0;
  std::size_t good    = 0;
  std::vector<bool> pick(args.n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(args.t), true);
  do
  {
    std::vector<shamir::Share> sub;
    for (std::size_t i = 0; i < args.n; ++i)
    {
      if (pick[i])
      {
        sub.push_back(shares[i]);
      }
    }
    ++subsets;
    good += shamir::reconstruct(sub, args.t, field) == secret ? 1 : 0;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::cout << good << " of " << subsets << " " << args.t << "-subsets reconstruct the secret\n";

  shamir::SharingPolicy wider{args.n + 2, args.t + 1};
  auto const moved = shamir::reshare(shares, args.t, wider, field, rng);
  auto const again = shamir::reconstruct(moved.new_shares, wider.t(), field);
  std::cout << "reshared to " << wider.t() << "-of-" << wider.n() << ": "
            << (again == secret ? "secret preserved" : "SECRET LOST") << '\n';
  return good == subsets && again == secret ? kClean : kInvariantBreach;
}

int demo_blind_vote(CryptoArgs const &args)
{
  auto const votes = parse_votes(args.votes);
  if (votes.size() != args.n)
  {
    throw InvalidArgument("--votes must list exactly n votes");
  }
  Rng        rng{args.seed};
  auto const round = blind::setup_round(args.n, args.t, fhe::FheParams::desk_default(), rng);

  std::vector<blind::EncryptedStrategy> ballots;
  std::uint64_t                         expected = 0;
  for (std::size_t i = 0; i < votes.size(); ++i)
  {
    ballots.push_back(blind::encrypt_strategy(round, i, votes[i], 1));
    expected += votes[i] == game::Vote::Top ? 1 : 0;
    std::cout << "ballot " << i << ' ' << short_hex(blind::ciphertext_digest(ballots.back().ct))
              << '\n';
  }
  std::vector<std::uint64_t> weights(ballots.size(), 1);
  auto const                 tally = blind::homomorphic_tally(ballots, weights);
  std::vector<blind::KeyShareBundle> bundles(round.aggregation.shares.begin(),
                                             round.aggregation.shares.begin() +
                                                 static_cast<std::ptrdiff_t>(args.t));
  auto const opening = blind::threshold_decrypt(tally, bundles, args.t, round.field);
  auto const ok      = blind::verify(opening.transcript, tally, bundles, args.t, round.field);
  std::cout << opening.transcript.to_text();
  std::cout << "tally " << opening.plaintext << " expected " << expected << " transcript "
            << (ok ? "verified" : "FAILED") << '\n';
  return ok && opening.plaintext == expected ? kClean : kInvariantBreach;
}

int crypto_demo(CryptoArgs const &args)
{
  if (args.demo == "fhe")
  {
    return demo_fhe(args);
  }
  if (args.demo == "shamir")
  {
    return demo_shamir(args);
  }
  return demo_blind_vote(args);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"monadring: token-ring subnet simulator, voting-game solver and crypto demos"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto        *simulate_cmd = app.add_subcommand("simulate", "run a scenario");
  simulate_cmd->add_option("--scenario", sim_args.scenario, "scenario YAML file")->required();
  simulate_cmd->add_option("--seed", sim_args.seed, "override the scenario seed");
  simulate_cmd->add_option("--metrics-out", sim_args.metrics_out, "write metrics CSV here");
  simulate_cmd->add_option("--log-out", sim_args.log_out, "write the event log here");
  simulate_cmd->add_flag("--quiet", sim_args.quiet, "do not print the event log");

  EquilibriumArgs eq_args;
  auto           *eq_cmd = app.add_subcommand("equilibrium", "solve or optimise the voting game");
  eq_cmd->add_option("--n", eq_args.n, "voters")->required();
  eq_cmd->add_option("--theta-top", eq_args.theta_top)->required();
  eq_cmd->add_option("--theta-bot", eq_args.theta_bot)->required();
  eq_cmd->add_option("--alpha", eq_args.alpha)->required();
  eq_cmd->add_option("--beta", eq_args.beta)->required();
  eq_cmd->add_flag("--optimize", eq_args.optimize, "run the mechanism optimiser, print its trace");
  eq_cmd->add_option("--xi0", eq_args.xi0, "optimiser start, default the solved equilibrium");
  eq_cmd->add_option("--lambda", eq_args.lambda);
  eq_cmd->add_option("--lambda1", eq_args.lambda1);
  eq_cmd->add_option("--lambda2", eq_args.lambda2);
  eq_cmd->add_option("--max-iters", eq_args.max_iters);
  eq_cmd->add_flag("--freeze-theta", eq_args.freeze_theta);

  CryptoArgs crypto_args;
  auto      *crypto_cmd = app.add_subcommand("crypto-demo", "FHE, Shamir and blind-vote demos");
  crypto_cmd->add_option("demo", crypto_args.demo)
      ->required()
      ->check(CLI::IsMember({"fhe", "shamir", "blind-vote"}));
  crypto_cmd->add_option("--n", crypto_args.n);
  crypto_cmd->add_option("--t", crypto_args.t);
  crypto_cmd->add_option("--votes", crypto_args.votes, "comma-separated 0/1 votes");
  crypto_cmd->add_option("--seed", crypto_args.seed);
  crypto_cmd->add_option("--secret", crypto_args.secret);

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    auto const code = app.exit(e);
    return code == 0 ? kClean : kInputError;
  }

  try
  {
    if (*simulate_cmd)
    {
      return simulate(sim_args);
    }
    if (*eq_cmd)
    {
      return equilibrium(eq_args);
    }
    return crypto_demo(crypto_args);
  }
  catch (ScenarioError const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  catch (InvalidArgument const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  catch (Error const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariantBreach;
  }
}
