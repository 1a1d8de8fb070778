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

// Voting-game mathematics: a subgame of n voters casting Top or Bot, a voter
// earning beta when its side strictly clears its threshold and losing alpha
// when the opposite side does.

#include "monadring/common.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace monadring::game {

enum class Vote
{
  Top,
  Bot,
};

Vote        opposite(Vote v);
char const *to_string(Vote v);

/// Threshold fraction held as an exact rational (six decimal digits).
class Threshold
{
public:
  explicit Threshold(double fraction);

  double        value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::int64_t  numerator() const { return num_; }
  std::int64_t  denominator() const { return den_; }

  /// count > fraction * n, decided by integer cross-multiplication.
  bool exceeded_by(std::int64_t count, std::int64_t n) const;

  /// Smallest integer count with count > fraction * n.
  std::int64_t min_exceeding(std::int64_t n) const;

private:
  std::int64_t num_;
  std::int64_t den_;
};

struct VotingGameParams
{
  std::size_t n{2};
  double      theta_top{0.5};
  double      theta_bot{0.5};
  double      alpha{1.0};
  double      beta{1.0};
  double      weight{1.0};
  // recorded global context, unused by the subgame solvers
  std::size_t global_n{0};
  double      theta_global{0.0};

  /// Throws InvalidArgument on n < 2, thresholds outside (0,1], sum < 1,
  /// negative alpha/beta/weight.
  void validate() const;

  Threshold top() const { return Threshold{theta_top}; }
  Threshold bot() const { return Threshold{theta_bot}; }
};

struct VoteState
{
  std::size_t n_top{0};
  std::size_t n_bot{0};

  std::size_t seen() const { return n_top + n_bot; }
};

struct Strategy
{
  double xi{0.5};
};

// ---- payoffs and thresholds ------------------------------------------------

double payoff(VotingGameParams const &params, Vote own, std::size_t final_top,
              std::size_t final_bot);

/// Residual Top threshold for the voter who has seen `state`; +inf when Bot
/// has already clinched, 0 when Top has.
double subgame_threshold_top(VotingGameParams const &params, VoteState const &state);
double subgame_threshold_bot(VotingGameParams const &params, VoteState const &state);

// ---- perfect information ---------------------------------------------------

struct RationalVote
{
  enum class Kind
  {
    Top,
    Bot,
    Randomize,
  };
  Kind kind;
  /// Ideal-information tie-break (side with the smaller deficit).
  Vote tie_break{Vote::Top};
  /// Probability of Top when randomizing.
  double bias{1.0};
};

/// `expected_future` holds the Top probability of every voter after this one.
RationalVote rational_vote_perfect(VotingGameParams const &params, VoteState const &state,
                                   std::span<double const> expected_future,
                                   std::optional<double> bias = std::nullopt);

// ---- imperfect information -------------------------------------------------

/// Conditional expected payoff when every other voter votes Top with
/// probability xi. Exact binomial tails over the n-1 other voters.
double expected_payoff(VotingGameParams const &params, double xi, Vote conditioned);

/// The conditional expectations with the penalty tails taken over n trials,
/// as the formulas are usually printed. Differs from expected_payoff.
double expected_payoff_printed(VotingGameParams const &params, double xi, Vote conditioned);

/// xi-mixture of the two conditionals.
double posterior_expectation(VotingGameParams const &params, double xi);

double expected_payoff_grad_xi(VotingGameParams const &params, double xi, Vote conditioned);

/// d/dxi of posterior_expectation, combined from the conditionals and their
/// derivatives.
double posterior_grad_xi(VotingGameParams const &params, double xi);

struct EquilibriumSolution
{
  Strategy            strategy;        // interior root with the best posterior value
  std::vector<double> interior_roots;  // every bracketed root, ascending
  bool                zero_is_stationary{false};
  bool                one_is_stationary{false};
  double              closed_form{0.0};  // theta_bot / (theta_top + theta_bot)
  double              residual{0.0};     // posterior_grad_xi at the reported root
};

/// Bisection on posterior_grad_xi over (1e-6, 1-1e-6). Throws NoInteriorRoot.
EquilibriumSolution solve_equilibrium_xi(VotingGameParams const &params);

/// KKT condition at a boundary strategy: the gradient points outward or is 0.
bool boundary_is_stationary(VotingGameParams const &params, double xi_boundary);

// ---- threshold sensitivities -----------------------------------------------

/// Beta density; throws DomainError unless a, b > 0 and x in [0, 1].
double beta_pdf(double x, double a, double b);

struct ThetaGradients
{
  double top_wrt_top;  // dE_top / dtheta_top
  double top_wrt_bot;  // dE_top / dtheta_bot
  double bot_wrt_bot;  // dE_bot / dtheta_bot
  double bot_wrt_top;  // dE_bot / dtheta_top
  double total_wrt_top;
  double total_wrt_bot;
};

/// Beta-density sensitivities of the conditionals to the thresholds (the
/// continuous relaxation in theta*n), mixed by xi.
ThetaGradients theta_gradients(VotingGameParams const &params, double xi);

// ---- mechanism design ------------------------------------------------------

struct MechanismObjective
{
  double lambda{0.0};
  double lambda1{0.0};
  double lambda2{0.0};
  double rho_cutoff{0.95};

  void validate() const;
};

/// Pr[#Top/n > theta_top] with #Top ~ Bin(n, xi).
double pass_probability_top(VotingGameParams const &params, double xi);
/// Pr[#Bot/n > theta_bot] with #Bot ~ Bin(n, 1 - xi).
double pass_probability_bot(VotingGameParams const &params, double xi);

/// E + lambda*(dE/dtheta_top + dE/dtheta_bot)^2 + lambda1*rho_top + lambda2*rho_bot,
/// rho = 1 when the pass probability is below rho_cutoff.
double mechanism_objective(VotingGameParams const &params, MechanismObjective const &objective,
                           double xi);

struct MechanismState
{
  double theta_top;
  double theta_bot;
  double xi;
};

struct TraceRow
{
  std::size_t iter;
  double      f;
  double      xi;
  double      theta_top;
  double      theta_bot;
};

struct OptimizerOptions
{
  double      xi_rate{0.01};
  double      theta_rate{1e-4};
  double      tolerance{1e-10};
  std::size_t max_iters{10000};
  bool        freeze_theta{false};
  double      fd_step{1e-6};
  double      theta_floor{0.05};
};

struct MechanismResult
{
  MechanismState        state;
  std::vector<TraceRow> trace;
  bool                  converged{false};
};

/// Alternating ascent in xi and descent in theta until |dF| < tolerance.
/// Throws NonConvergence after max_iters.
MechanismResult optimize_mechanism(MechanismObjective const &objective, MechanismState init,
                                   VotingGameParams const &params,
                                   OptimizerOptions const &options = {});

// ---- finite games ----------------------------------------------------------

/// Finite (Bayesian) game. A complete-information game has one type per player.
struct GameDefs
{
  std::size_t                      players{0};
  std::vector<std::size_t>         strategy_counts;
  std::vector<std::size_t>         type_counts;
  std::vector<std::vector<double>> type_priors;
  /// payoff(player, actions, types)
  std::function<double(std::size_t, std::span<std::size_t const>, std::span<std::size_t const>)>
         payoff;
  double epsilon{0.0};

  void validate() const;
};

/// Complete-information game from one payoff table per player, indexed
/// row-major by the action profile.
GameDefs normal_form(std::vector<std::size_t> strategy_counts,
                     std::vector<std::vector<double>> tables);

/// argmax over the player's actions against the others in `profile`; lowest
/// index wins ties. Throws InvalidArgument for an empty strategy space.
std::size_t best_response(GameDefs const &defs, std::size_t player,
                          std::span<std::size_t const> profile);

/// Largest gain any player gets by deviating unilaterally from `profile`.
double max_deviation_gain(GameDefs const &defs, std::span<std::size_t const> profile);

bool is_epsilon_equilibrium(GameDefs const &defs, std::span<std::size_t const> profile,
                            double epsilon);

/// Bayesian best response of `player` with type `own_type` when every player j
/// plays type_strategies[j][type]; opponents' types are averaged under their priors.
std::size_t bayesian_best_response(GameDefs const &defs, std::size_t player, std::size_t own_type,
                                   std::vector<std::vector<std::size_t>> const &type_strategies);

namespace detail {

/// Pr[Bin(m, p) >= k].
double binomial_upper_tail(std::size_t m, double p, std::int64_t k);
/// d/dp Pr[Bin(m, p) >= k].
double binomial_upper_tail_grad(std::size_t m, double p, std::int64_t k);
double binomial_pmf(std::size_t m, std::size_t k, double p);

}  // namespace detail

}  // namespace monadring::game
