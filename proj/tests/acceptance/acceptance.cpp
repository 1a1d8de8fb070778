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


// Acceptance checks. `acceptance AC<k>` runs one criterion, `acceptance all`
// runs every one; each prints a single PASS or FAIL line.

#include "monadring/blind_voting.hpp"
#include "monadring/fhe.hpp"
#include "monadring/shamir.hpp"
#include "monadring/sim.hpp"
#include "monadring/voting_game.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace monadring;

namespace {

struct Outcome
{
  bool        pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(char const *format, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(char const *format, ...)
{
  char    buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

game::VotingGameParams params(std::size_t n, double top, double bot, double alpha = 1.0,
                              double beta = 1.0)
{
  game::VotingGameParams p;
  p.n         = n;
  p.theta_top = top;
  p.theta_bot = bot;
  p.alpha     = alpha;
  p.beta      = beta;
  return p;
}

std::string scenario(std::string const &name)
{
  return std::string{MONADRING_SCENARIO_DIR} + "/" + name;
}

// ---- AC1 -------------------------------------------------------------------

Outcome ac1()
{
  auto const  start       = Clock::now();
  std::size_t sym_total   = 0;
  std::size_t sym_ok      = 0;
  std::size_t asym_total  = 0;
  std::size_t asym_ok     = 0;
  double      worst       = 0.0;
  std::string worst_point;
  for (std::size_t n : {5u, 10u, 50u})
  {
    for (int i = 4; i <= 9; ++i)
    {
      for (int j = 4; j <= 9; ++j)
      {
        if (i + j < 10)
        {
          continue;
        }
        double const top = i / 10.0;
        double const bot = j / 10.0;
        auto const   p   = params(n, top, bot);
        double       xi  = std::nan("");
        try
        {
          xi = game::solve_equilibrium_xi(p).strategy.xi;
        }
        catch (Error const &)
        {
        }
        double const target = bot / (top + bot);
        double const err    = std::isnan(xi) ? 1.0 : std::abs(xi - target);
        bool const   ok     = err < 1e-3;
        if (i == j)
        {
          ++sym_total;
          sym_ok += ok ? 1 : 0;
        }
        else
        {
          ++asym_total;
          asym_ok += ok ? 1 : 0;
        }
        if (err > worst)
        {
          worst       = err;
          worst_point = fmt("n=%zu top=%.1f bot=%.1f xi=%.4f target=%.4f", n, top, bot, xi,
                            target);
        }
      }
    }
  }
  double const secs = seconds_since(start);
  bool const   pass = sym_ok == sym_total && asym_ok == asym_total && secs < 10.0;
  return {pass, fmt("symmetric %zu/%zu, asymmetric %zu/%zu within 1e-3; worst %s; %.2fs", sym_ok,
                    sym_total, asym_ok, asym_total, worst_point.c_str(), secs)};
}

// ---- AC2 -------------------------------------------------------------------

bool exceeds(std::size_t count, std::size_t n, double theta)
{
  auto const micro = static_cast<long long>(std::llround(theta * 1e6));
  return static_cast<long long>(count) * 1'000'000LL > micro * static_cast<long long>(n);
}

double brute_force(game::VotingGameParams const &p, double xi, game::Vote own)
{
  bool const  own_top = own == game::Vote::Top;
  auto const  others  = p.n - 1;
  double      total   = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others); ++mask)
  {
    std::size_t tops = own_top ? 1 : 0;
    double      prob = 1.0;
    for (std::size_t j = 0; j < others; ++j)
    {
      bool const top = (mask >> j) & 1U;
      tops += top ? 1 : 0;
      prob *= top ? xi : 1.0 - xi;
    }
    auto const bots    = p.n - tops;
    auto const own_cnt = own_top ? tops : bots;
    auto const opp_cnt = own_top ? bots : tops;
    if (exceeds(own_cnt, p.n, own_top ? p.theta_top : p.theta_bot))
    {
      total += prob * p.beta;
    }
    else if (exceeds(opp_cnt, p.n, own_top ? p.theta_bot : p.theta_top))
    {
      total -= prob * p.alpha;
    }
  }
  return total;
}

Outcome ac2()
{
  auto const  start  = Clock::now();
  double      worst  = 0.0;
  std::size_t checks = 0;
  for (std::size_t n = 2; n <= 12; ++n)
  {
    for (int i = 4; i <= 9; ++i)
    {
      for (int j = 4; j <= 9; ++j)
      {
        if (i + j < 10)
        {
          continue;
        }
        auto const p = params(n, i / 10.0, j / 10.0, 1.5, 0.8);
        for (int k = 0; k <= 10; ++k)
        {
          double const xi = k / 10.0;
          for (auto v : {game::Vote::Top, game::Vote::Bot})
          {
            worst = std::max(worst, std::abs(game::expected_payoff(p, xi, v) - brute_force(p, xi, v)));
            ++checks;
          }
        }
      }
    }
  }
  double const secs = seconds_since(start);
  return {worst < 1e-9 && secs < 30.0,
          fmt("%zu expectations vs enumeration, max error %.3g; %.2fs", checks, worst, secs)};
}

// ---- AC3 -------------------------------------------------------------------

double relative_error(double a, double b)
{
  double const scale = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) / scale;
}

// Regularized incomplete beta I_x(a, b) by composite Simpson on the density.
double incomplete_beta(double x, double a, double b)
{
  if (x <= 0.0)
  {
    return 0.0;
  }
  double const log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto         pdf      = [&](double t) {
    if (t <= 0.0 || t >= 1.0)
    {
      return 0.0;
    }
    return std::exp(log_norm + (a - 1) * std::log(t) + (b - 1) * std::log(1 - t));
  };
  int const    steps = 4000;
  double const h     = x / steps;
  double       sum   = pdf(0.0) + pdf(x);
  for (int s = 1; s < steps; ++s)
  {
    sum += pdf(s * h) * (s % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Continuous relaxation of the Top-conditional in the thresholds: the tails
// Pr[Bin(m, x) >= k] = I_x(k, m - k + 1) with k taken real.
double relaxed_top(game::VotingGameParams const &p, double xi)
{
  double const n  = static_cast<double>(p.n);
  double const tt = p.theta_top * n;
  double const tb = p.theta_bot * n;
  return p.beta * incomplete_beta(xi, tt, n - tt + 1.0) -
         p.alpha * incomplete_beta(1.0 - xi, tb + 1.0, n - tb + 1.0);
}

Outcome ac3()
{
  auto const  start    = Clock::now();
  double const h       = 1e-6;
  double      worst_xi = 0.0;
  std::size_t xi_bad   = 0;
  double      worst_th = 0.0;
  std::size_t th_bad   = 0;
  std::size_t points   = 0;
  for (int a = 1; a <= 9; ++a)
  {
    double const xi = a / 10.0;
    for (int b = 0; b < 9; ++b)
    {
      double const theta = 0.5 + 0.05 * b;
      auto const   p     = params(10, theta, theta, 1.0, 2.0);
      ++points;

      for (auto v : {game::Vote::Top, game::Vote::Bot})
      {
        double const fd =
            (game::expected_payoff(p, xi + h, v) - game::expected_payoff(p, xi - h, v)) / (2 * h);
        double const e = std::abs(fd) < 1e-9
                             ? std::abs(game::expected_payoff_grad_xi(p, xi, v) - fd)
                             : relative_error(game::expected_payoff_grad_xi(p, xi, v), fd);
        worst_xi       = std::max(worst_xi, e);
        xi_bad += e >= 1e-5 ? 1 : 0;
      }

      double const dt = 1e-4;
      auto         up = p;
      auto         dn = p;
      up.theta_top += dt;
      dn.theta_top -= dt;
      double const fd_top = (relaxed_top(up, xi) - relaxed_top(dn, xi)) / (2 * dt);
      double const e      = relative_error(game::theta_gradients(p, xi).top_wrt_top, fd_top);
      worst_th            = std::max(worst_th, e);
      th_bad += e >= 1e-5 ? 1 : 0;
    }
  }
  double const secs = seconds_since(start);
  return {xi_bad == 0 && th_bad == 0,
          fmt("xi derivatives: %zu/%zu off, max rel error %.2g; theta derivatives vs relaxed "
              "finite differences: %zu/%zu off, max rel error %.2g; %.2fs",
              xi_bad, 2 * points, worst_xi, th_bad, points, worst_th, secs)};
}

// ---- AC4 -------------------------------------------------------------------

Outcome ac4()
{
  auto const start  = Clock::now();
  auto const params = fhe::FheParams::desk_default();
  Rng        rng{20260104};
  auto const keys   = fhe::generate_keys(params, rng);
  auto const p      = params.plaintext_modulus();

  std::size_t roundtrip_failures = 0;
  for (int i = 0; i < 1000; ++i)
  {
    fhe::Plaintext m{std::vector<std::int64_t>(params.ring_degree())};
    for (auto &c : m.coeffs)
    {
      c = static_cast<std::int64_t>(rng.below(p));
    }
    auto const ct = fhe::encrypt(keys.pub, m, params, rng);
    if (fhe::decrypt(keys.secret, ct) != m ||
        static_cast<double>(fhe::measured_noise(keys.secret, ct, m)) > ct.noise_budget)
    {
      ++roundtrip_failures;
    }
  }

  std::size_t tally_failures = 0;
  double      worst_budget   = 0.0;
  for (std::size_t votes = 1; votes <= 64; ++votes)
  {
    std::int64_t                   expected = 0;
    std::optional<fhe::Ciphertext> acc;
    for (std::size_t v = 0; v < votes; ++v)
    {
      auto const vote   = static_cast<std::int64_t>(rng.below(2));
      auto const weight = static_cast<std::int64_t>(1 + rng.below(16));
      expected += vote * weight;
      auto ct = fhe::encrypt(keys.pub, fhe::Plaintext::constant(vote, params.ring_degree()),
                             params, rng);
      ct      = fhe::hom_mul_plain(ct, fhe::Plaintext::constant(weight, params.ring_degree()));
      acc     = acc ? fhe::hom_add(*acc, ct) : ct;
    }
    auto const sum  = fhe::Plaintext::constant(expected, params.ring_degree());
    auto const diag = fhe::decrypt_diagnostic(keys.secret, *acc);
    bool const ok   = diag.reliable && diag.plaintext == sum &&
                    static_cast<double>(fhe::measured_noise(keys.secret, *acc, sum)) <=
                        acc->noise_budget &&
                    acc->noise_budget < params.decryption_bound();
    tally_failures += ok ? 0 : 1;
    worst_budget = std::max(worst_budget, acc->noise_budget / params.decryption_bound());
  }
  double const secs = seconds_since(start);
  return {roundtrip_failures == 0 && tally_failures == 0 && secs < 60.0,
          fmt("1000 roundtrips, %zu failed; 64 weighted tallies, %zu failed, worst budget %.3g "
              "of the bound; %.2fs",
              roundtrip_failures, tally_failures, worst_budget, secs)};
}

// ---- AC5 -------------------------------------------------------------------

void for_each_subset(std::size_t n, std::size_t k,
                     std::function<void(std::vector<std::size_t> const &)> const &fn)
{
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
  {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k)
    {
      continue;
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
    {
      if (mask >> i & 1U)
      {
        idx.push_back(i);
      }
    }
    fn(idx);
  }
}

Outcome ac5()
{
  shamir::Field field;
  Rng           rng{20260105};
  std::size_t   subsets  = 0;
  std::size_t   failures = 0;
  for (auto [n, t] : {std::pair<std::size_t, std::size_t>{3, 2}, {5, 3}, {7, 4}})
  {
    auto const secret = rng.below(field.prime());
    auto const shares = shamir::share(secret, shamir::SharingPolicy{n, t}, field, rng);
    for_each_subset(n, t, [&](auto const &idx) {
      std::vector<shamir::Share> pick;
      for (auto i : idx)
      {
        pick.push_back(shares[i]);
      }
      ++subsets;
      failures += shamir::reconstruct(pick, t, field) == secret ? 0 : 1;
    });
  }

  auto const secret  = rng.below(field.prime());
  auto const old     = shamir::share(secret, shamir::SharingPolicy{5, 3}, field, rng);
  auto const moved   = shamir::reshare(old, 3, shamir::SharingPolicy{7, 4}, field, rng);
  std::size_t re_subsets = 0;
  std::size_t re_fail    = 0;
  for_each_subset(7, 4, [&](auto const &idx) {
    std::vector<shamir::Share> pick;
    for (auto i : idx)
    {
      pick.push_back(moved.new_shares[i]);
    }
    ++re_subsets;
    re_fail += shamir::reconstruct(pick, 4, field) == secret ? 0 : 1;
  });
  return {failures == 0 && re_fail == 0 && re_subsets == 35,
          fmt("%zu t-subsets, %zu failed; reshare (5,3)->(7,4): %zu 4-subsets, %zu failed", subsets,
              failures, re_subsets, re_fail)};
}

// ---- AC6 -------------------------------------------------------------------

Outcome ac6()
{
  auto s   = sim::load_scenario(scenario("honest.yaml"));
  s.rounds = 20;
  sim::Simulation simulation{s};
  auto const      result = simulation.run();
  auto const     &m      = result.metrics;
  bool const pass = simulation.config().n() == 5 && m.rounds_completed == 20 &&
                    m.agreement_checkpoints >= 20 && m.disagreements == 0 &&
                    m.own_q_returns >= 20 * 5 - 5 && m.own_q_nonzero == 0 &&
                    m.violations.empty();
  return {pass, fmt("%llu rounds, %llu agreement checks, %llu disagreements, %llu own-q returns, "
                    "%llu nonzero",
                    static_cast<unsigned long long>(m.rounds_completed),
                    static_cast<unsigned long long>(m.agreement_checkpoints),
                    static_cast<unsigned long long>(m.disagreements),
                    static_cast<unsigned long long>(m.own_q_returns),
                    static_cast<unsigned long long>(m.own_q_nonzero))};
}

// ---- AC7 -------------------------------------------------------------------

Outcome ac7()
{
  auto const drop_s = sim::load_scenario(scenario("drop_token.yaml"));
  sim::Simulation drop{drop_s};
  auto const      d     = drop.run().metrics;
  auto const      limit = 2 * drop.config().n() * drop_s.epsilon;
  std::uint64_t   worst = 0;
  for (auto l : d.recovery_latencies)
  {
    worst = std::max(worst, l);
  }
  bool const drop_ok = d.tokens_lost == 1 && d.tokens_recovered == 1 && worst <= limit &&
                       d.rounds_completed == drop_s.rounds && d.disagreements == 0;

  auto const      crash_s = sim::load_scenario(scenario("crash.yaml"));
  auto const      crash   = sim::run(crash_s);
  std::uint64_t   crash_time = 0;
  std::uint64_t   after      = 0;
  std::istringstream in{crash.log};
  std::string        line;
  while (std::getline(in, line))
  {
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    auto const r = sim::LogRecord::parse(line);
    if (r.kind == "FAULT" && crash_time == 0)
    {
      crash_time = r.time;
    }
    else if (r.kind == "ROUND_END" && crash_time > 0)
    {
      ++after;
    }
  }
  bool const crash_ok = crash_time > 0 && after > 0 &&
                        crash.metrics.rounds_completed == crash_s.rounds &&
                        crash.metrics.disagreements == 0;
  return {drop_ok && crash_ok,
          fmt("drop: lost %llu, recovered %llu in %llu <= %llu; crash: %llu rounds completed "
              "after the crash, %llu disagreements",
              static_cast<unsigned long long>(d.tokens_lost),
              static_cast<unsigned long long>(d.tokens_recovered),
              static_cast<unsigned long long>(worst), static_cast<unsigned long long>(limit),
              static_cast<unsigned long long>(after),
              static_cast<unsigned long long>(crash.metrics.disagreements))};
}

// ---- AC8 -------------------------------------------------------------------

Outcome ac8()
{
  bool        pass = true;
  std::string detail;
  for (auto name : {"tamper.yaml", "double_sign.yaml"})
  {
    sim::Simulation simulation{sim::load_scenario(scenario(name))};
    auto const      result = simulation.run();
    auto const     &ev     = simulation.evidence();

    bool sig_ok = false;
    if (ev.size() == 1)
    {
      auto const &e = ev.front();
      sig_ok        = e.first.signature != e.second.signature &&
               ring::verify_group(e.first, simulation.hostnet()) &&
               ring::verify_group(e.second, simulation.hostnet()) &&
               ring::verify_evidence(e, simulation.hostnet());
    }

    std::size_t        evidence_lines = 0;
    std::size_t        tallies        = 0;
    bool               tally_ok       = true;
    std::istringstream in{result.log};
    std::string        line;
    while (std::getline(in, line))
    {
      if (line.empty() || line[0] == '#')
      {
        continue;
      }
      auto const r = sim::LogRecord::parse(line);
      if (r.kind == "EVIDENCE")
      {
        ++evidence_lines;
      }
      else if (r.kind == "TALLY")
      {
        ++tallies;
        tally_ok = tally_ok && r.number("plain") == r.number("expected");
      }
    }
    bool const ok = ev.size() == 1 && evidence_lines == 1 && sig_ok && tallies == 1 && tally_ok &&
                    result.metrics.transcript_failures == 0;
    pass          = pass && ok;
    detail += fmt("%s%s: evidence %zu, signatures %s, tally %s", detail.empty() ? "" : "; ", name,
                  ev.size(), sig_ok ? "verify" : "bad",
                  tallies == 1 && tally_ok ? "matches" : "mismatch");
  }
  return {pass, detail};
}

// ---- AC9 -------------------------------------------------------------------

Outcome ac9()
{
  bool        pass = true;
  std::string detail;
  for (std::string name : {"honest", "drop_token", "tamper"})
  {
    auto const s      = sim::load_scenario(scenario(name + ".yaml"));
    auto const first  = sim::run(s).log;
    auto const second = sim::run(s).log;

    std::ifstream      golden{std::string{MONADRING_GOLDEN_DIR} + "/" + name + ".log",
                         std::ios::binary};
    std::ostringstream expected;
    expected << golden.rdbuf();
    bool const repeat = first == second;
    bool const gold   = golden.good() && expected.str() == first;
    pass              = pass && repeat && gold;
    detail += fmt("%s%s: repeat %s, golden %s", detail.empty() ? "" : "; ", name.c_str(),
                  repeat ? "identical" : "differs", gold ? "identical" : "differs");
  }
  return {pass, detail};
}

struct Criterion
{
  char const *name;
  Outcome (*check)();
};

constexpr Criterion kCriteria[] = {
    {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
    {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
};

}  // namespace

int main(int argc, char **argv)
{
  std::string const which = argc > 1 ? argv[1] : "all";
  bool              found = false;
  bool              all   = true;
  for (auto const &c : kCriteria)
  {
    if (which != "all" && which != c.name)
    {
      continue;
    }
    found = true;
    Outcome o{false, {}};
    try
    {
      o = c.check();
    }
    catch (std::exception const &e)
    {
      o = {false, std::string{"exception: "} + e.what()};
    }
    std::printf("%s %s %s\n", c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    all = all && o.pass;
  }
  if (!found)
  {
    std::fprintf(stderr, "usage: acceptance [all|AC1..AC9]\n");
    return 2;
  }
  return all ? 0 : 1;
}
