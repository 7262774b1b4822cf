// Copyright 2026 The corecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORECUT_TESTS_SUPPORT_HPP
#define CORECUT_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "corecut/game.hpp"
#include "corecut/linear_program.hpp"
#include "corecut/rational.hpp"

namespace test_support {

using corecut::Coalition;
using corecut::Game;
using corecut::Rational;
using corecut::RationalMatrix;
using corecut::RationalVec;
using corecut::Vec;

// Three players, two goods, one unit of budget each; player 3 dislikes the
// first good.  The canonical game whose core is empty.
inline Game aversion_game() {
  RationalMatrix production{{Rational(1), Rational(1)}};
  std::vector<RationalVec> endowments{{Rational(1)}, {Rational(1)}, {Rational(1)}};
  std::vector<RationalVec> valuations{{Rational(2, 3), Rational(1, 3)},
                                      {Rational(2, 3), Rational(1, 3)},
                                      {Rational(-2, 3), Rational(1, 3)}};
  return Game(std::move(production), std::move(endowments), std::move(valuations));
}

inline bool satisfies(const corecut::ConstraintSystem& system, const Vec& z, double tol = 1e-9) {
  for (const auto& row : system.rows) {
    double act = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) act += row.coeffs[j] * z[j];
    switch (row.sense) {
      case corecut::RowSense::LessEqual:
        if (act > row.rhs + tol) return false;
        break;
      case corecut::RowSense::GreaterEqual:
        if (act < row.rhs - tol) return false;
        break;
      case corecut::RowSense::Equal:
        if (std::abs(act - row.rhs) > tol) return false;
        break;
    }
  }
  for (std::size_t j = 0; j < z.size(); ++j)
    if (z[j] < system.lower[j] - tol || z[j] > system.upper[j] + tol) return false;
  return true;
}

// Deterministic uniform helpers on top of the standardized mt19937_64 raw
// stream; std::uniform_* distributions are implementation-defined.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct RandomGameSpec {
  int max_players = 6;
  int max_goods = 4;
  int max_resources = 2;
};

// Random game with positive endowments and nonnegative valuations; every
// good consumes at least one resource so all design spaces stay bounded.
inline Game random_game(std::uint64_t seed, const RandomGameSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  const int n = uniform_int(rng, 2, spec.max_players);
  const int m = uniform_int(rng, 1, spec.max_goods);
  const int k = uniform_int(rng, 1, spec.max_resources);
  RationalMatrix production(k, RationalVec(m, Rational(0)));
  for (int j = 0; j < m; ++j) {
    bool positive = false;
    for (int r = 0; r < k; ++r) {
      const int num = uniform_int(rng, 0, 4);
      production[r][j] = Rational(num, uniform_int(rng, 1, 3));
      if (num > 0) positive = true;
    }
    if (!positive) production[0][j] = Rational(1);
  }
  std::vector<RationalVec> endowments(n, RationalVec(k, Rational(0)));
  for (auto& b : endowments)
    for (auto& e : b) e = Rational(uniform_int(rng, 1, 4), uniform_int(rng, 1, 2));
  std::vector<RationalVec> valuations(n, RationalVec(m, Rational(0)));
  for (auto& v : valuations)
    for (auto& val : v) val = Rational(uniform_int(rng, 0, 5), uniform_int(rng, 1, 3));
  return Game(std::move(production), std::move(endowments), std::move(valuations));
}

// Single-budget-row games with spread-out good costs and sparse player
// preferences.  The welfare optimum tends to fund an expensive good a few
// players need, which cheap-good coalitions then block; these games drive
// the cutting-plane machinery where the uniform family above converges
// immediately.
inline Game random_blocking_game(std::uint64_t seed, int max_players = 5, int max_goods = 4) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int n = uniform_int(rng, 3, max_players);
  const int m = uniform_int(rng, 2, max_goods);
  RationalMatrix production(1, RationalVec(m, Rational(0)));
  for (int j = 0; j < m; ++j)
    production[0][j] = Rational(uniform_int(rng, 1, 16), 2);  // costs in [0.5, 8]
  std::vector<RationalVec> endowments(n, RationalVec{Rational(1)});
  std::vector<RationalVec> valuations(n, RationalVec(m, Rational(0)));
  for (int i = 0; i < n; ++i) {
    const int home = uniform_int(rng, 0, m - 1);
    valuations[i][home] = Rational(uniform_int(rng, 2, 4), 2);
    if (uniform_int(rng, 0, 2) == 0)
      valuations[i][uniform_int(rng, 0, m - 1)] = Rational(uniform_int(rng, 1, 2), 2);
  }
  return Game(std::move(production), std::move(endowments), std::move(valuations));
}

// A random feasible plan of X(N): scale a random positive direction to fit
// the pooled budget, with optional slack so interior points also occur.
inline Vec random_grand_plan(const Game& game, std::mt19937_64& rng, bool tight = false) {
  const auto grand = Coalition::full(game.num_players());
  const Vec budget = corecut::pooled_endowment_d(game, grand);
  Vec x(game.num_goods());
  for (auto& v : x) v = uniform(rng, 0.05, 1.0);
  double scale = corecut::kInf;
  for (int r = 0; r < game.num_resources(); ++r) {
    double act = 0.0;
    for (int j = 0; j < game.num_goods(); ++j) act += game.production_d()[r][j] * x[j];
    if (act > 1e-12) scale = std::min(scale, budget[r] / act);
  }
  if (scale == corecut::kInf) scale = 1.0;
  const double shrink = tight ? 1.0 : uniform(rng, 0.3, 1.0);
  for (auto& v : x) v *= scale * shrink;
  return x;
}

inline corecut::UtilityVector utilities_of(const Game& game, const Vec& x) {
  corecut::UtilityVector u;
  u.u.assign(game.num_players(), 0.0);
  for (int i = 0; i < game.num_players(); ++i)
    u.u[i] = corecut::evaluate_utility(game, i, corecut::DesignPlan{x});
  return u;
}

}  // namespace test_support

#include "corecut/membership.hpp"
#include "corecut/optimizer.hpp"
#include "corecut/oracle.hpp"

namespace test_support {

// Oracle-certified core-feasible design-utility samples (x, u).  Candidates
// are vertices of the grand design-utility polytope clipped to individual
// rationality, under random positive utility weightings; the clipping rules
// out singleton blocks up front, so most candidates survive the full
// certification.
inline std::vector<Vec> sample_core_points(const Game& game, int want, std::mt19937_64& rng,
                                           int max_tries = 4000) {
  std::vector<Vec> out;
  const int J = game.num_goods(), N = game.num_players();
  auto system = corecut::design_utility_space(game, Coalition::full(N));
  const auto ir = corecut::membership::singleton_lower_bounds(game);
  const auto bounds = corecut::membership::utility_bounds(game);
  for (int i = 0; i < N; ++i) system.set_bounds(J + i, ir[i], bounds.upper[i]);
  for (int t = 0; t < max_tries && static_cast<int>(out.size()) < want; ++t) {
    Vec objective(static_cast<std::size_t>(J + N), 0.0);
    for (int i = 0; i < N; ++i) objective[J + i] = uniform(rng, 0.05, 1.0);
    const auto sol = corecut::lp::solve(corecut::LinearProgram(system, true, objective));
    if (sol.status != corecut::LpStatus::Optimal) continue;
    corecut::UtilityVector u;
    u.u.assign(sol.x.begin() + J, sol.x.begin() + J + N);
    const auto verdict = corecut::oracle::is_blocked_exact(game, u);
    if (verdict.blocked) continue;
    out.push_back(Vec(sol.x.begin(), sol.x.begin() + J + N));
    if (t > want && out.empty()) break;  // vertex sampling is not hitting the core
  }
  // Some cores touch no vertex of the uncut polytope; top up by optimizing
  // random utility directions to convergence.  Certification stays with the
  // enumeration oracle either way.
  int stuck = 0;
  while (static_cast<int>(out.size()) < want && stuck < 3 * want) {
    corecut::opt::RunConfig config;
    config.delta = 1e-6;
    config.max_iterations = 150;
    config.objective.kind = corecut::opt::ObjectiveKind::CustomLinear;
    config.objective.coefficients.assign(static_cast<std::size_t>(J + N), 0.0);
    for (int i = 0; i < N; ++i) config.objective.coefficients[J + i] = uniform(rng, 0.05, 1.0);
    const auto result = corecut::opt::solve_over_core(game, config);
    if (result.status != corecut::opt::RunStatus::Converged) {
      ++stuck;
      continue;
    }
    const auto verdict = corecut::oracle::is_blocked_exact(game, result.utilities);
    if (verdict.blocked) {
      ++stuck;
      continue;
    }
    Vec sample = result.plan.x;
    sample.insert(sample.end(), result.utilities.u.begin(), result.utilities.u.end());
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace test_support

#endif  // CORECUT_TESTS_SUPPORT_HPP
