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

#include "monadring/voting_game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace monadring::game {

namespace {

constexpr std::int64_t kThresholdScale = 1'000'000;
constexpr double       kXiLow          = 1e-6;
constexpr double       kXiHigh         = 1.0 - 1e-6;
constexpr std::size_t  kScanCells      = 999;  // odd, keeps 0.5 off the grid

void check_xi(double xi)
{
  if (!(xi >= 0.0 && xi <= 1.0))
  {
    throw InvalidArgument("xi must lie in [0, 1]");
  }
}

double binomial_coefficient(std::size_t m, std::size_t k)
{
  if (k > m)
  {
    return 0.0;
  }
  k = std::min(k, m - k);
  if (m <= 60)
  {
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
    {
      c = c * static_cast<double>(m - k + i) / static_cast<double>(i);
    }
    return std::round(c);
  }
  return std::exp(std::lgamma(static_cast<double>(m) + 1.0) -
                  std::lgamma(static_cast<double>(k) + 1.0) -
                  std::lgamma(static_cast<double>(m - k) + 1.0));
}

/// Exact tails: the voter itself is one of the n counted votes.
struct Tails
{
  double win;
  double lose;
};

Tails conditional_tails(VotingGameParams const &params, double xi, Vote conditioned)
{
  auto const n      = static_cast<std::int64_t>(params.n);
  auto const others = params.n - 1;
  auto const top    = params.top();
  auto const bot    = params.bot();
  // #Top among others ~ Bin(n-1, xi), #Bot among others ~ Bin(n-1, 1-xi)
  if (conditioned == Vote::Top)
  {
    return Tails{detail::binomial_upper_tail(others, xi, top.min_exceeding(n) - 1),
                 detail::binomial_upper_tail(others, 1.0 - xi, bot.min_exceeding(n))};
  }
  return Tails{detail::binomial_upper_tail(others, 1.0 - xi, bot.min_exceeding(n) - 1),
               detail::binomial_upper_tail(others, xi, top.min_exceeding(n))};
}

Tails conditional_tail_grads(VotingGameParams const &params, double xi, Vote conditioned)
{
  auto const n      = static_cast<std::int64_t>(params.n);
  auto const others = params.n - 1;
  auto const top    = params.top();
  auto const bot    = params.bot();
  // chain rule through 1 - xi flips the sign
  if (conditioned == Vote::Top)
  {
    return Tails{detail::binomial_upper_tail_grad(others, xi, top.min_exceeding(n) - 1),
                 -detail::binomial_upper_tail_grad(others, 1.0 - xi, bot.min_exceeding(n))};
  }
  return Tails{-detail::binomial_upper_tail_grad(others, 1.0 - xi, bot.min_exceeding(n) - 1),
               detail::binomial_upper_tail_grad(others, xi, top.min_exceeding(n))};
}

double bisect(VotingGameParams const &params, double lo, double hi)
{
  double glo = posterior_grad_xi(params, lo);
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter)
  {
    double const mid  = 0.5 * (lo + hi);
    double const gmid = posterior_grad_xi(params, mid);
    if (gmid == 0.0)
    {
      return mid;
    }
    if ((gmid < 0.0) == (glo < 0.0))
    {
      lo  = mid;
      glo = gmid;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::size_t profile_index(std::vector<std::size_t> const &counts,
                          std::span<std::size_t const> actions)
{
  std::size_t idx = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
  {
    idx = idx * counts[i] + actions[i];
  }
  return idx;
}

}  // namespace

// ---- basics ----------------------------------------------------------------

Vote opposite(Vote v)
{
  return v == Vote::Top ? Vote::Bot : Vote::Top;
}

char const *to_string(Vote v)
{
  return v == Vote::Top ? "top" : "bot";
}

Threshold::Threshold(double fraction)
{
  if (!std::isfinite(fraction) || fraction < 0.0)
  {
    throw InvalidArgument("threshold must be a finite nonnegative fraction");
  }
  num_ = std::llround(fraction * static_cast<double>(kThresholdScale));
  den_ = kThresholdScale;
  auto const g = std::gcd(num_, den_);
  if (g > 1)
  {
    num_ /= g;
    den_ /= g;
  }
}

bool Threshold::exceeded_by(std::int64_t count, std::int64_t n) const
{
  return static_cast<__int128>(count) * den_ > static_cast<__int128>(num_) * n;
}

std::int64_t Threshold::min_exceeding(std::int64_t n) const
{
  return static_cast<std::int64_t>(static_cast<__int128>(num_) * n / den_) + 1;
}

void VotingGameParams::validate() const
{
  if (n < 2)
  {
    throw InvalidArgument("voting game needs n >= 2");
  }
  auto in_range = [](double t) { return t > 0.0 && t <= 1.0; };
  if (!in_range(theta_top) || !in_range(theta_bot))
  {
    throw InvalidArgument("thresholds must lie in (0, 1]");
  }
  auto const t = top();
  auto const b = bot();
  // theta_top + theta_bot >= 1 on the exact rationals
  if (static_cast<__int128>(t.numerator()) * b.denominator() +
          static_cast<__int128>(b.numerator()) * t.denominator() <
      static_cast<__int128>(t.denominator()) * b.denominator())
  {
    throw InvalidArgument("need theta_top + theta_bot >= 1");
  }
  if (alpha < 0.0 || beta < 0.0 || weight < 0.0)
  {
    throw InvalidArgument("alpha, beta and weight must be nonnegative");
  }
}

double payoff(VotingGameParams const &params, Vote own, std::size_t final_top,
              std::size_t final_bot)
{
  params.validate();
  if (final_top + final_bot != params.n)
  {
    throw InvalidArgument("final counts must sum to n");
  }
  auto const n        = static_cast<std::int64_t>(params.n);
  auto const own_cnt  = static_cast<std::int64_t>(own == Vote::Top ? final_top : final_bot);
  auto const opp_cnt  = static_cast<std::int64_t>(own == Vote::Top ? final_bot : final_top);
  auto const own_thr  = own == Vote::Top ? params.top() : params.bot();
  auto const opp_thr  = own == Vote::Top ? params.bot() : params.top();
  if (own_thr.exceeded_by(own_cnt, n))
  {
    return params.beta;
  }
  if (opp_thr.exceeded_by(opp_cnt, n))
  {
    return -params.alpha;
  }
  return 0.0;
}

namespace {

void check_state(VotingGameParams const &params, VoteState const &state)
{
  if (state.seen() > params.n - 1)
  {
    throw InvalidArgument("a voter can observe at most n-1 earlier votes");
  }
}

double residual_threshold(VotingGameParams const &params, VoteState const &state, Vote side)
{
  params.validate();
  check_state(params, state);
  auto const n         = static_cast<std::int64_t>(params.n);
  auto const own_thr   = side == Vote::Top ? params.top() : params.bot();
  auto const opp_thr   = side == Vote::Top ? params.bot() : params.top();
  auto const own_count = static_cast<std::int64_t>(side == Vote::Top ? state.n_top : state.n_bot);
  auto const opp_count = static_cast<std::int64_t>(side == Vote::Top ? state.n_bot : state.n_top);

  // count >= theta*n  <=>  count*den >= num*n
  auto reached = [n](Threshold const &t, std::int64_t count) {
    return static_cast<__int128>(count) * t.denominator() >=
           static_cast<__int128>(t.numerator()) * n;
  };
  if (reached(own_thr, own_count))
  {
    return 0.0;
  }
  if (reached(opp_thr, opp_count))
  {
    return std::numeric_limits<double>::infinity();
  }
  auto const remaining = static_cast<double>(n - static_cast<std::int64_t>(state.seen()));
  return (own_thr.value() * static_cast<double>(n) - static_cast<double>(own_count)) / remaining;
}

}  // namespace

double subgame_threshold_top(VotingGameParams const &params, VoteState const &state)
{
  return residual_threshold(params, state, Vote::Top);
}

double subgame_threshold_bot(VotingGameParams const &params, VoteState const &state)
{
  return residual_threshold(params, state, Vote::Bot);
}

RationalVote rational_vote_perfect(VotingGameParams const &params, VoteState const &state,
                                   std::span<double const> expected_future,
                                   std::optional<double> bias)
{
  params.validate();
  check_state(params, state);
  if (expected_future.size() != params.n - state.seen() - 1)
  {
    throw InvalidArgument("expected_future must cover every later voter");
  }
  double future_top = 0.0;
  double future_bot = 0.0;
  for (auto p : expected_future)
  {
    check_xi(p);
    future_top += p;
    future_bot += 1.0 - p;
  }
  if (bias && !(*bias >= 0.0 && *bias <= 1.0))
  {
    throw InvalidArgument("bias must lie in [0, 1]");
  }

  auto const n   = static_cast<std::int64_t>(params.n);
  auto const top = params.top();
  auto const bot = params.bot();
  auto clinches = [n](Threshold const &t, std::size_t count, double future) {
    auto const lhs = (static_cast<long double>(count) + 1.0L + future) * t.denominator();
    return lhs > static_cast<long double>(t.numerator()) * n;
  };

  // deficits theta*n - count compared exactly: (num*n - count*den)/den
  auto const top_deficit =
      static_cast<__int128>(top.numerator()) * n - static_cast<__int128>(state.n_top) * top.denominator();
  auto const bot_deficit =
      static_cast<__int128>(bot.numerator()) * n - static_cast<__int128>(state.n_bot) * bot.denominator();
  Vote const tie_break = top_deficit * bot.denominator() < bot_deficit * top.denominator()
                             ? Vote::Top
                             : Vote::Bot;

  if (clinches(top, state.n_top, future_top))
  {
    return RationalVote{RationalVote::Kind::Top, tie_break, 1.0};
  }
  if (clinches(bot, state.n_bot, future_bot))
  {
    return RationalVote{RationalVote::Kind::Bot, tie_break, 0.0};
  }
  return RationalVote{RationalVote::Kind::Randomize, tie_break,
                      bias.value_or(tie_break == Vote::Top ? 1.0 : 0.0)};
}

// ---- imperfect information -------------------------------------------------

namespace detail {

double binomial_pmf(std::size_t m, std::size_t k, double p)
{
  if (k > m)
  {
    return 0.0;
  }
  return binomial_coefficient(m, k) * std::pow(p, static_cast<double>(k)) *
         std::pow(1.0 - p, static_cast<double>(m - k));
}

double binomial_upper_tail(std::size_t m, double p, std::int64_t k)
{
  if (k <= 0)
  {
    return 1.0;
  }
  if (k > static_cast<std::int64_t>(m))
  {
    return 0.0;
  }
  double sum = 0.0;
  for (auto i = static_cast<std::size_t>(k); i <= m; ++i)
  {
    sum += binomial_pmf(m, i, p);
  }
  return sum;
}

double binomial_upper_tail_grad(std::size_t m, double p, std::int64_t k)
{
  if (k <= 0 || k > static_cast<std::int64_t>(m))
  {
    return 0.0;
  }
  // d/dp Pr[X >= k] = m * C(m-1, k-1) p^(k-1) (1-p)^(m-k)
  auto const kk = static_cast<std::size_t>(k);
  return static_cast<double>(m) * binomial_pmf(m - 1, kk - 1, p);
}

}  // namespace detail

double expected_payoff(VotingGameParams const &params, double xi, Vote conditioned)
{
  params.validate();
  check_xi(xi);
  auto const t = conditional_tails(params, xi, conditioned);
  return params.beta * t.win - params.alpha * t.lose;
}

double expected_payoff_printed(VotingGameParams const &params, double xi, Vote conditioned)
{
  params.validate();
  check_xi(xi);
  auto const n   = static_cast<std::int64_t>(params.n);
  auto const win = conditional_tails(params, xi, conditioned).win;
  double     lose;
  if (conditioned == Vote::Top)
  {
    lose = detail::binomial_upper_tail(params.n, 1.0 - xi, params.bot().min_exceeding(n));
  }
  else
  {
    lose = detail::binomial_upper_tail(params.n, xi, params.top().min_exceeding(n));
  }
  return params.beta * win - params.alpha * lose;
}

double posterior_expectation(VotingGameParams const &params, double xi)
{
  return xi * expected_payoff(params, xi, Vote::Top) +
         (1.0 - xi) * expected_payoff(params, xi, Vote::Bot);
}

double expected_payoff_grad_xi(VotingGameParams const &params, double xi, Vote conditioned)
{
  params.validate();
  check_xi(xi);
  auto const g = conditional_tail_grads(params, xi, conditioned);
  return params.beta * g.win - params.alpha * g.lose;
}

double posterior_grad_xi(VotingGameParams const &params, double xi)
{
  auto const e_top = expected_payoff(params, xi, Vote::Top);
  auto const e_bot = expected_payoff(params, xi, Vote::Bot);
  auto const d_top = expected_payoff_grad_xi(params, xi, Vote::Top);
  auto const d_bot = expected_payoff_grad_xi(params, xi, Vote::Bot);
  return d_top * xi + e_top + d_bot * (1.0 - xi) - e_bot;
}

bool boundary_is_stationary(VotingGameParams const &params, double xi_boundary)
{
  if (xi_boundary == 0.0)
  {
    return posterior_grad_xi(params, 0.0) <= 0.0;
  }
  if (xi_boundary == 1.0)
  {
    return posterior_grad_xi(params, 1.0) >= 0.0;
  }
  throw InvalidArgument("boundary strategy must be 0 or 1");
}

EquilibriumSolution solve_equilibrium_xi(VotingGameParams const &params)
{
  params.validate();
  EquilibriumSolution sol;
  sol.closed_form        = params.theta_bot / (params.theta_top + params.theta_bot);
  sol.zero_is_stationary = boundary_is_stationary(params, 0.0);
  sol.one_is_stationary  = boundary_is_stationary(params, 1.0);

  double const        h = (kXiHigh - kXiLow) / static_cast<double>(kScanCells);
  std::vector<double> grid(kScanCells + 1);
  std::vector<double> grad(kScanCells + 1);
  for (std::size_t k = 0; k <= kScanCells; ++k)
  {
    grid[k] = k == kScanCells ? kXiHigh : kXiLow + h * static_cast<double>(k);
    grad[k] = posterior_grad_xi(params, grid[k]);
  }
  for (std::size_t k = 0; k < kScanCells; ++k)
  {
    if (grad[k] == 0.0)
    {
      sol.interior_roots.push_back(grid[k]);
    }
    else if ((grad[k] < 0.0) != (grad[k + 1] < 0.0) && grad[k + 1] != 0.0)
    {
      sol.interior_roots.push_back(bisect(params, grid[k], grid[k + 1]));
    }
  }
  if (grad[kScanCells] == 0.0)
  {
    sol.interior_roots.push_back(grid[kScanCells]);
  }
  if (sol.interior_roots.empty())
  {
    throw NoInteriorRoot("posterior derivative keeps one sign on (1e-6, 1-1e-6)");
  }
  auto best = std::max_element(sol.interior_roots.begin(), sol.interior_roots.end(),
                               [&](double a, double b) {
                                 return posterior_expectation(params, a) <
                                        posterior_expectation(params, b);
                               });
  sol.strategy.xi = *best;
  sol.residual    = posterior_grad_xi(params, *best);
  return sol;
}

// ---- threshold sensitivities -----------------------------------------------

double beta_pdf(double x, double a, double b)
{
  if (!(a > 0.0) || !(b > 0.0))
  {
    throw DomainError("beta density needs a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0))
  {
    throw DomainError("beta density support is [0, 1]");
  }
  if (x == 0.0 || x == 1.0)
  {
    double const e = x == 0.0 ? a : b;
    if (e < 1.0)
    {
      return std::numeric_limits<double>::infinity();
    }
    if (e > 1.0)
    {
      return 0.0;
    }
    return std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
  }
  double const log_pdf = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
  return std::exp(log_pdf);
}

ThetaGradients theta_gradients(VotingGameParams const &params, double xi)
{
  params.validate();
  if (!(xi > 0.0 && xi < 1.0))
  {
    throw DomainError("theta gradients need an interior xi");
  }
  auto const n  = static_cast<double>(params.n);
  auto const tt = params.theta_top * n;
  auto const tb = params.theta_bot * n;

  ThetaGradients g{};
  g.top_wrt_top = params.beta * n * beta_pdf(xi, tt, n - tt + 1.0) * n;
  g.top_wrt_bot = -params.alpha * n * beta_pdf(1.0 - xi, tb + 1.0, n - tb + 1.0) * (n + 1.0);
  g.bot_wrt_bot = params.beta * n * beta_pdf(xi, tb, n - tb + 1.0) * n;
  g.bot_wrt_top = -params.alpha * n * beta_pdf(1.0 - xi, tt + 1.0, n - tt + 1.0) * (n + 1.0);
  g.total_wrt_top = g.top_wrt_top * xi + g.bot_wrt_top * (1.0 - xi);
  g.total_wrt_bot = g.top_wrt_bot * xi + g.bot_wrt_bot * (1.0 - xi);
  return g;
}

// ---- mechanism design ------------------------------------------------------

void MechanismObjective::validate() const
{
  if (lambda < 0.0 || lambda1 < 0.0 || lambda2 < 0.0)
  {
    throw InvalidArgument("regularization coefficients must be nonnegative");
  }
  if (!(rho_cutoff > 0.0 && rho_cutoff < 1.0))
  {
    throw InvalidArgument("rho_cutoff must lie in (0, 1)");
  }
}

double pass_probability_top(VotingGameParams const &params, double xi)
{
  params.validate();
  check_xi(xi);
  return detail::binomial_upper_tail(params.n, xi,
                                     params.top().min_exceeding(static_cast<std::int64_t>(params.n)));
}

double pass_probability_bot(VotingGameParams const &params, double xi)
{
  params.validate();
  check_xi(xi);
  return detail::binomial_upper_tail(params.n, 1.0 - xi,
                                     params.bot().min_exceeding(static_cast<std::int64_t>(params.n)));
}

namespace {

double regularizer(VotingGameParams const &params, MechanismObjective const &objective, double xi)
{
  if (objective.lambda == 0.0)
  {
    return 0.0;
  }
  auto const g   = theta_gradients(params, xi);
  auto const sum = g.total_wrt_top + g.total_wrt_bot;
  return objective.lambda * sum * sum;
}

void project(MechanismState &s, OptimizerOptions const &options)
{
  s.xi        = std::clamp(s.xi, kXiLow, kXiHigh);
  s.theta_top = std::clamp(s.theta_top, options.theta_floor, 1.0);
  s.theta_bot = std::clamp(s.theta_bot, options.theta_floor, 1.0);
  double const deficit = 1.0 - (s.theta_top + s.theta_bot);
  if (deficit > 0.0)
  {
    s.theta_top = std::min(1.0, s.theta_top + deficit / 2.0);
    s.theta_bot = std::min(1.0, 1.0 - s.theta_top + 1e-12);
    s.theta_bot = std::max(s.theta_bot, 1.0 - s.theta_top);
  }
}

VotingGameParams with_thetas(VotingGameParams p, MechanismState const &s)
{
  p.theta_top = s.theta_top;
  p.theta_bot = s.theta_bot;
  return p;
}

}  // namespace

double mechanism_objective(VotingGameParams const &params, MechanismObjective const &objective,
                           double xi)
{
  objective.validate();
  double f = posterior_expectation(params, xi) + regularizer(params, objective, xi);
  if (pass_probability_top(params, xi) < objective.rho_cutoff)
  {
    f += objective.lambda1;
  }
  if (pass_probability_bot(params, xi) < objective.rho_cutoff)
  {
    f += objective.lambda2;
  }
  return f;
}

MechanismResult optimize_mechanism(MechanismObjective const &objective, MechanismState init,
                                   VotingGameParams const &params, OptimizerOptions const &options)
{
  objective.validate();
  params.validate();
  MechanismResult result;
  result.state = init;
  project(result.state, options);

  auto &s = result.state;
  double f = mechanism_objective(with_thetas(params, s), objective, s.xi);
  result.trace.push_back(TraceRow{0, f, s.xi, s.theta_top, s.theta_bot});

  double const h = options.fd_step;
  for (std::size_t iter = 1; iter <= options.max_iters; ++iter)
  {
    // ascent in xi
    {
      auto const p      = with_thetas(params, s);
      double     grad   = posterior_grad_xi(p, s.xi);
      if (objective.lambda != 0.0)
      {
        double const lo = std::max(kXiLow, s.xi - h);
        double const hi = std::min(kXiHigh, s.xi + h);
        grad += (regularizer(p, objective, hi) - regularizer(p, objective, lo)) / (hi - lo);
      }
      s.xi = std::clamp(s.xi + options.xi_rate * grad, kXiLow, kXiHigh);
    }
    // descent in theta
    if (!options.freeze_theta)
    {
      auto const p = with_thetas(params, s);
      auto const g = theta_gradients(p, s.xi);
      double     d_top = g.total_wrt_top;
      double     d_bot = g.total_wrt_bot;
      if (objective.lambda != 0.0)
      {
        auto shifted = [&](double dt, double db) {
          MechanismState q = s;
          q.theta_top += dt;
          q.theta_bot += db;
          return regularizer(with_thetas(params, q), objective, s.xi);
        };
        d_top += (shifted(h, 0) - shifted(-h, 0)) / (2 * h);
        d_bot += (shifted(0, h) - shifted(0, -h)) / (2 * h);
      }
      s.theta_top -= options.theta_rate * d_top;
      s.theta_bot -= options.theta_rate * d_bot;
    }
    project(s, options);

    double const f_new = mechanism_objective(with_thetas(params, s), objective, s.xi);
    result.trace.push_back(TraceRow{iter, f_new, s.xi, s.theta_top, s.theta_bot});
    if (std::abs(f_new - f) < options.tolerance)
    {
      result.converged = true;
      return result;
    }
    f = f_new;
  }
  throw NonConvergence("mechanism optimizer did not converge in " +
                       std::to_string(options.max_iters) + " iterations");
}

// ---- finite games ----------------------------------------------------------

void GameDefs::validate() const
{
  if (players == 0 || strategy_counts.size() != players)
  {
    throw InvalidArgument("strategy_counts must list every player");
  }
  for (auto c : strategy_counts)
  {
    if (c == 0)
    {
      throw InvalidArgument("empty strategy space");
    }
  }
  if (type_counts.size() != players || type_priors.size() != players)
  {
    throw InvalidArgument("type spaces must list every player");
  }
  for (std::size_t i = 0; i < players; ++i)
  {
    if (type_counts[i] == 0 || type_priors[i].size() != type_counts[i])
    {
      throw InvalidArgument("type prior size mismatch");
    }
    double total = 0.0;
    for (auto p : type_priors[i])
    {
      if (p < 0.0)
      {
        throw InvalidArgument("negative type prior");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
    {
      throw InvalidArgument("type priors must sum to 1");
    }
  }
  if (epsilon < 0.0)
  {
    throw InvalidArgument("epsilon must be nonnegative");
  }
  if (!payoff)
  {
    throw InvalidArgument("payoff function missing");
  }
}

GameDefs normal_form(std::vector<std::size_t> strategy_counts,
                     std::vector<std::vector<double>> tables)
{
  GameDefs defs;
  defs.players = strategy_counts.size();
  std::size_t cells = 1;
  for (auto c : strategy_counts)
  {
    if (c == 0)
    {
      throw InvalidArgument("empty strategy space");
    }
    cells *= c;
  }
  if (tables.size() != defs.players)
  {
    throw InvalidArgument("one payoff table per player");
  }
  for (auto const &t : tables)
  {
    if (t.size() != cells)
    {
      throw InvalidArgument("payoff table size does not match the strategy spaces");
    }
  }
  defs.strategy_counts = strategy_counts;
  defs.type_counts.assign(defs.players, 1);
  defs.type_priors.assign(defs.players, std::vector<double>{1.0});
  defs.payoff = [counts = std::move(strategy_counts), tables = std::move(tables)](
                    std::size_t player, std::span<std::size_t const> actions,
                    std::span<std::size_t const>) {
    return tables[player][profile_index(counts, actions)];
  };
  return defs;
}

std::size_t best_response(GameDefs const &defs, std::size_t player,
                          std::span<std::size_t const> profile)
{
  defs.validate();
  if (player >= defs.players || profile.size() != defs.players)
  {
    throw InvalidArgument("profile must name one action per player");
  }
  std::vector<std::size_t> actions(profile.begin(), profile.end());
  std::vector<std::size_t> types(defs.players, 0);
  std::size_t              best_action = 0;
  double                   best_value  = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < defs.strategy_counts[player]; ++a)
  {
    actions[player]  = a;
    double const val = defs.payoff(player, actions, types);
    if (val > best_value)
    {
      best_value  = val;
      best_action = a;
    }
  }
  return best_action;
}

double max_deviation_gain(GameDefs const &defs, std::span<std::size_t const> profile)
{
  defs.validate();
  if (profile.size() != defs.players)
  {
    throw InvalidArgument("profile must name one action per player");
  }
  std::vector<std::size_t> types(defs.players, 0);
  double                   worst = 0.0;
  for (std::size_t i = 0; i < defs.players; ++i)
  {
    std::vector<std::size_t> actions(profile.begin(), profile.end());
    double const             current = defs.payoff(i, actions, types);
    for (std::size_t a = 0; a < defs.strategy_counts[i]; ++a)
    {
      actions[i] = a;
      worst      = std::max(worst, defs.payoff(i, actions, types) - current);
    }
  }
  return worst;
}

bool is_epsilon_equilibrium(GameDefs const &defs, std::span<std::size_t const> profile,
                            double epsilon)
{
  if (epsilon < 0.0)
  {
    throw InvalidArgument("epsilon must be nonnegative");
  }
  return max_deviation_gain(defs, profile) <= epsilon;
}

std::size_t bayesian_best_response(GameDefs const &defs, std::size_t player, std::size_t own_type,
                                   std::vector<std::vector<std::size_t>> const &type_strategies)
{
  defs.validate();
  if (player >= defs.players || own_type >= defs.type_counts[player] ||
      type_strategies.size() != defs.players)
  {
    throw InvalidArgument("bad player, type or strategy table");
  }
  for (std::size_t j = 0; j < defs.players; ++j)
  {
    if (type_strategies[j].size() != defs.type_counts[j])
    {
      throw InvalidArgument("type strategy must map every type");
    }
  }

  std::size_t best_action = 0;
  double      best_value  = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < defs.strategy_counts[player]; ++a)
  {
    // enumerate opponents' type profiles, own type fixed
    std::vector<std::size_t> types(defs.players, 0);
    types[player] = own_type;
    double expected = 0.0;
    for (;;)
    {
      double                   weight = 1.0;
      std::vector<std::size_t> actions(defs.players);
      for (std::size_t j = 0; j < defs.players; ++j)
      {
        actions[j] = j == player ? a : type_strategies[j][types[j]];
        if (j != player)
        {
          weight *= defs.type_priors[j][types[j]];
        }
      }
      expected += weight * defs.payoff(player, actions, types);

      std::size_t j = 0;
      for (; j < defs.players; ++j)
      {
        if (j == player)
        {
          continue;
        }
        if (++types[j] < defs.type_counts[j])
        {
          break;
        }
        types[j] = 0;
      }
      if (j == defs.players)
      {
        break;
      }
    }
    if (expected > best_value)
    {
      best_value  = expected;
      best_action = a;
    }
  }
  return best_action;
}

}  // namespace monadring::game
